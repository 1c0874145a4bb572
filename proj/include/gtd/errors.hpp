#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gtd {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation outside the mathematical domain of an operation
// (log of a non-positive value, division by a zero value part, a point
// outside a relation's domain, a failed implicit solve, ...).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

// Representation change requested at a point where the conjugate
// intensive variable vanishes.
class SingularRepresentation : public Error {
 public:
  explicit SingularRepresentation(const std::string& what) : Error(what) {}
};

// Expression text rejected by the parser.  `offset` is the byte offset of
// the offending token; `expected` lists what would have been accepted.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected,
             const std::string& found)
      : Error(format_message(offset, expected, found)),
        offset_(offset),
        expected_(std::move(expected)) {}
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string format_message(std::size_t offset,
                                    const std::vector<std::string>& expected,
                                    const std::string& found) {
    std::string msg = "parse error at byte " + std::to_string(offset) +
                      ": found " + found + ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += " | ";
      msg += expected[i];
    }
    return msg;
  }
  std::size_t offset_;
  std::vector<std::string> expected_;
};

// Identifier in an expression that is not a declared variable.
class UnknownVariable : public Error {
 public:
  UnknownVariable(const std::string& name, std::size_t offset)
      : Error("unknown variable '" + name + "' at byte " +
              std::to_string(offset)),
        name_(name),
        offset_(offset) {}
  const std::string& name() const { return name_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

// A map whose pullback of the contact form is not proportional to it.
class NotAContactomorphism : public Error {
 public:
  explicit NotAContactomorphism(const std::string& what) : Error(what) {}
};

// Metric determinant below the scale-adjusted degeneracy threshold.
class DegenerateMetric : public Error {
 public:
  explicit DegenerateMetric(const std::string& what) : Error(what) {}
};

// Jet and finite-difference curvature pipelines disagree beyond tolerance.
class BackendDisagreement : public Error {
 public:
  explicit BackendDisagreement(const std::string& what) : Error(what) {}
};

// A verification claim was asked about a system that does not satisfy the
// claim's hypotheses (e.g. a non-homogeneous relation).
class HypothesisNotMet : public Error {
 public:
  explicit HypothesisNotMet(const std::string& what) : Error(what) {}
};

// Malformed run configuration (CLI or config file).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace gtd
