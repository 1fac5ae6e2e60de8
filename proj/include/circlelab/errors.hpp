#pragma once

// Error taxonomy for the laboratory.  Each class corresponds to one failure
// mode the command line tool turns into a distinct exit code:
//
//   std::invalid_argument / std::domain_error  -> bad parameter value   (3)
//   capacity_error / value_overflow_error      -> resource budget hit   (4)
//   non_convergence_error / ill_conditioned    -> refinement stalled    (5)
//   invariant_violation                        -> internal check failed (6)
//
// Everything carries enough state to reproduce the failing call.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace circlelab {

// A requested table, grid, or workspace exceeds its configured budget.
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exact integer table entry left the representable range.  `index()` is
// the first argument n whose value could not be stored.
class value_overflow_error : public std::runtime_error {
 public:
  value_overflow_error(const std::string& what, std::uint64_t n)
      : std::runtime_error(what), n_(n) {}
  std::uint64_t index() const noexcept { return n_; }

 private:
  std::uint64_t n_;
};

// An iterative refinement ran out of budget before meeting its tolerance.
// The last two estimates are kept so the caller can judge how close it got.
class non_convergence_error : public std::runtime_error {
 public:
  non_convergence_error(const std::string& what, double last, double previous)
      : std::runtime_error(what), last_(last), previous_(previous) {}
  double last_estimate() const noexcept { return last_; }
  double previous_estimate() const noexcept { return previous_; }

 private:
  double last_;
  double previous_;
};

// A least squares system was too close to singular to trust.
class ill_conditioned_error : public std::runtime_error {
 public:
  ill_conditioned_error(const std::string& what, double cond)
      : std::runtime_error(what), cond_(cond) {}
  double condition_estimate() const noexcept { return cond_; }

 private:
  double cond_;
};

// A structural property that must hold by construction failed to hold.
// Thrown instead of silently repairing the structure.
class invariant_violation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace circlelab
