#pragma once

#include <cstdint>
#include <stdexcept>

namespace gtcount::bounds {

// Raised when a formula is evaluated outside the regime where it says
// anything (as opposed to a plain argument-domain violation, which raises
// std::invalid_argument).
struct OutsideRegime : std::domain_error {
  using std::domain_error::domain_error;
};

// All formulas use base-2 logarithms and return raw real values; lower
// bounds may be negative and are not clamped here.

// Expected-query budget of the two-stage counter: d * log2(d/delta).
double ub_theorem5(std::uint64_t d, double delta);

// Worst-case budget of the classical doubling counter: 4*d*log2(d/delta).
double ub_cheng(std::uint64_t d, double delta);

// Query floor for any counter with failure probability delta:
// d * log2(1/(2*d*delta)) - 1. Informative when delta >= 1/(2(n-d+1)).
double lb_theorem1(std::uint64_t d, double delta);

// The floor that replaces lb_theorem1 below its delta regime: d * log2(n/d).
double lb_theorem1_small_delta(std::uint64_t n, std::uint64_t d);

// Query floor with the universe size n in play:
// (1 - (log2 d + log2(1/delta) + 1)/(log2 n + log2(1/delta))) * d * log2(1/(2*delta)).
double lb_theorem2(std::uint64_t n, std::uint64_t d, double delta);

// Sharper floor via tau = 1/(d*L), eta = 1/L with L = log2(1/(d*delta)):
// (1 - 1/d)(1 - eta)(d*log2(tau/(d*delta)) - log2(1/(1 - eta))).
// Requires d >= 2 and d*delta < 1/2; throws OutsideRegime when d*delta is
// too large for the formula to be defined or for the floor to be positive.
double lb_appendix(std::uint64_t d, double delta);

}  // namespace gtcount::bounds
