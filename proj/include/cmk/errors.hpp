#ifndef CMK_ERRORS_HPP
#define CMK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cmk {

// Bad user input: malformed instance, out-of-range parameter, unknown id.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Problem exceeds a configured size or resource limit.
struct capacity_error : std::runtime_error {
  explicit capacity_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Enumeration budget exceeded; carries the size estimate that tripped it.
struct budget_error : capacity_error {
  budget_error(const std::string& msg, double estimate)
      : capacity_error(msg), estimated_count(estimate) {}
  double estimated_count;
};

// Time limit hit; carries the best bound proven so far.
struct timeout_error : capacity_error {
  timeout_error(const std::string& msg, double bound)
      : capacity_error(msg), best_bound(bound) {}
  double best_bound;
};

// Broken internal invariant. Never expected on valid input.
struct internal_error : std::logic_error {
  explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

inline void internal_check(bool cond, const std::string& msg) {
  if (!cond) throw internal_error(msg);
}

}  // namespace cmk

#endif
