#include "gtcount/bounds.hpp"

#include <cmath>

namespace gtcount::bounds {

namespace {

void check_d(std::uint64_t d) {
  if (d < 1) throw std::invalid_argument("d must be >= 1");
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("delta must lie strictly inside (0, 1)");
}

}  // namespace

double ub_theorem5(std::uint64_t d, double delta) {
  check_d(d);
  check_delta(delta);
  return static_cast<double>(d) * std::log2(static_cast<double>(d) / delta);
}

double ub_cheng(std::uint64_t d, double delta) {
  return 4.0 * ub_theorem5(d, delta);
}

double lb_theorem1(std::uint64_t d, double delta) {
  check_d(d);
  check_delta(delta);
  return static_cast<double>(d) * std::log2(1.0 / (2.0 * static_cast<double>(d) * delta)) -
         1.0;
}

double lb_theorem1_small_delta(std::uint64_t n, std::uint64_t d) {
  check_d(d);
  if (n < d) throw std::invalid_argument("n must be >= d");
  return static_cast<double>(d) *
         std::log2(static_cast<double>(n) / static_cast<double>(d));
}

double lb_theorem2(std::uint64_t n, std::uint64_t d, double delta) {
  check_d(d);
  check_delta(delta);
  if (n < d) throw std::invalid_argument("n must be >= d");
  const double log_inv_delta = std::log2(1.0 / delta);
  const double factor =
      1.0 - (std::log2(static_cast<double>(d)) + log_inv_delta + 1.0) /
                (std::log2(static_cast<double>(n)) + log_inv_delta);
  return factor * static_cast<double>(d) * std::log2(1.0 / (2.0 * delta));
}

double lb_appendix(std::uint64_t d, double delta) {
  check_delta(delta);
  if (d < 2) throw std::invalid_argument("d must be >= 2");
  const double dd = static_cast<double>(d);
  if (!(dd * delta < 0.5))
    throw OutsideRegime("requires d*delta < 1/2 (eta would reach 1)");
  const double big_l = std::log2(1.0 / (dd * delta));  // > 1 here
  const double tau = 1.0 / (dd * big_l);
  const double eta = 1.0 / big_l;
  const double main_term =
      dd * std::log2(tau / (dd * delta)) - std::log2(1.0 / (1.0 - eta));
  if (!(main_term > 0.0))
    throw OutsideRegime("floor not positive at this d and delta; outside the regime");
  return (1.0 - 1.0 / dd) * (1.0 - eta) * main_term;
}

}  // namespace gtcount::bounds
