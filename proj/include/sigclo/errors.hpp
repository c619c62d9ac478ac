#pragma once

#include <stdexcept>
#include <string>

namespace sigclo {

// Input outside the supported domain (e.g. r <= 1). CLI exit code 2.
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// A comparison stayed undecided up to the maximum precision. The interval
// structure depends on every comparison, so this is fatal for a closure
// computation. CLI exit code 3.
class ComparisonError : public std::runtime_error {
public:
  ComparisonError(std::string lhs, std::string rhs)
      : std::runtime_error("comparison undecided at maximum precision: " + lhs +
                           "  vs  " + rhs),
        lhs_(std::move(lhs)),
        rhs_(std::move(rhs)) {}

  const std::string& lhs() const { return lhs_; }
  const std::string& rhs() const { return rhs_; }

private:
  std::string lhs_;
  std::string rhs_;
};

// A certified evaluation cannot reach the requested accuracy (e.g. zeta too
// close to the pole at 1).
class RangeError : public std::runtime_error {
public:
  explicit RangeError(const std::string& what) : std::runtime_error(what) {}
};

// A sigma factor for an already-present prime was multiplied into an endpoint
// expression. The recursion touches each prime exactly once, so this is a bug.
class DuplicatePrimeError : public std::logic_error {
public:
  explicit DuplicatePrimeError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace sigclo
