#include "gtd/multi_index.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace gtd {

MultiIndex make_index(std::initializer_list<int> exps) {
  if (static_cast<int>(exps.size()) > kMaxJetDim)
    throw std::invalid_argument("multi-index dimension too large");
  MultiIndex mi;
  mi.dim = static_cast<int>(exps.size());
  int d = 0;
  for (int v : exps) mi.e[d++] = static_cast<std::uint8_t>(v);
  return mi;
}

namespace {

void enumerate(int dim, int axis, int remaining, MultiIndex& cur,
               std::vector<MultiIndex>& out) {
  if (axis == dim) {
    out.push_back(cur);
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    cur.e[axis] = static_cast<std::uint8_t>(v);
    enumerate(dim, axis + 1, remaining - v, cur, out);
  }
  cur.e[axis] = 0;
}

double fact(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

JetTable::JetTable(int dim) : dim_(dim) {
  MultiIndex cur;
  cur.dim = dim;
  for (int ord = 0; ord <= kJetOrder; ++ord) {
    order_begin_[ord] = static_cast<int>(indices_.size());
    std::vector<MultiIndex> of_order;
    enumerate(dim, 0, ord, cur, of_order);
    for (const auto& mi : of_order)
      if (mi.order() == ord) indices_.push_back(mi);
  }
  order_begin_[kJetOrder + 1] = static_cast<int>(indices_.size());

  factorial_.resize(indices_.size());
  for (int pos = 0; pos < size(); ++pos) {
    double f = 1;
    for (int d = 0; d < dim_; ++d) f *= fact(indices_[pos].e[d]);
    factorial_[pos] = f;
    rank_[indices_[pos].packed()] = pos;
  }

  // Product plan grouped by output position so that division can solve
  // for coefficients in graded order.
  std::vector<std::vector<MulEntry>> by_out(size());
  for (int i = 0; i < size(); ++i) {
    const int oi = indices_[i].order();
    for (int j = 0; j < size(); ++j) {
      if (oi + indices_[j].order() > kJetOrder) continue;
      MultiIndex sum;
      sum.dim = dim_;
      for (int d = 0; d < dim_; ++d)
        sum.e[d] = static_cast<std::uint8_t>(indices_[i].e[d] +
                                             indices_[j].e[d]);
      const int out = rank_.at(sum.packed());
      by_out[out].push_back({i, j, out});
    }
  }
  plan_offset_.assign(size() + 1, 0);
  for (int out = 0; out < size(); ++out) {
    plan_offset_[out] = static_cast<int>(plan_.size());
    plan_.insert(plan_.end(), by_out[out].begin(), by_out[out].end());
  }
  plan_offset_[size()] = static_cast<int>(plan_.size());
}

int JetTable::rank(const MultiIndex& mi) const {
  auto it = rank_.find(mi.packed());
  return it == rank_.end() ? -1 : it->second;
}

const JetTable& JetTable::get(int dim) {
  if (dim < 1 || dim > kMaxJetDim)
    throw std::invalid_argument("jet dimension out of range");
  static std::array<std::unique_ptr<JetTable>, kMaxJetDim + 1> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (!cache[dim]) cache[dim].reset(new JetTable(dim));
  return *cache[dim];
}

}  // namespace gtd
