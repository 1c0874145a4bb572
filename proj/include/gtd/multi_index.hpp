#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace gtd {

inline constexpr int kJetOrder = 4;  // truncation order of all jets
inline constexpr int kMaxJetDim = 8;

// Exponent tuple of a partial derivative, e.g. (2,1,0) for d^3/dx^2 dy.
struct MultiIndex {
  std::array<std::uint8_t, kMaxJetDim> e{};
  int dim = 0;

  int order() const {
    int s = 0;
    for (int d = 0; d < dim; ++d) s += e[d];
    return s;
  }
  std::uint32_t packed() const {
    std::uint32_t k = 0;
    for (int d = dim - 1; d >= 0; --d) k = k * (kJetOrder + 1) + e[d];
    return k;
  }
  bool operator==(const MultiIndex& o) const {
    if (dim != o.dim) return false;
    for (int d = 0; d < dim; ++d)
      if (e[d] != o.e[d]) return false;
    return true;
  }
};

MultiIndex make_index(std::initializer_list<int> exps);

// Dense enumeration of all multi-indices with |alpha| <= kJetOrder for a
// fixed dimension, in graded lexicographic order, plus the product plan
// used by jet multiplication and division.  One immutable instance per
// dimension, built on first use.
class JetTable {
 public:
  static const JetTable& get(int dim);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const MultiIndex& alpha(int pos) const { return indices_[pos]; }
  // Position of a multi-index in the graded order; -1 if |alpha| > kJetOrder.
  int rank(const MultiIndex& mi) const;
  double factorial(int pos) const { return factorial_[pos]; }
  // First position whose total order is `order` (positions are graded).
  int order_begin(int order) const { return order_begin_[order]; }

  struct MulEntry {
    int lhs, rhs, out;
  };
  // All ordered coefficient pairs with |lhs|+|rhs| <= kJetOrder, sorted by
  // `out` in graded order.  Division walks the same plan.
  const std::vector<MulEntry>& mul_plan() const { return plan_; }
  // Half-open range [first, last) of plan entries for a given out position.
  std::pair<int, int> plan_range(int out) const {
    return {plan_offset_[out], plan_offset_[out + 1]};
  }

 private:
  explicit JetTable(int dim);
  int dim_;
  std::vector<MultiIndex> indices_;
  std::vector<double> factorial_;
  std::array<int, kJetOrder + 2> order_begin_{};
  std::unordered_map<std::uint32_t, int> rank_;
  std::vector<MulEntry> plan_;
  std::vector<int> plan_offset_;
};

}  // namespace gtd
