#include "memfem/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace memfem {

double balloon_pressure(double volume_ratio) {
  if (volume_ratio <= 0.0) throw std::invalid_argument("volume ratio must be positive");
  // lambda = (V/V0)^{1/3}; p R/(mu T) = 2 (lambda^{-1} - lambda^{-7})
  const double il = std::cbrt(1.0 / volume_ratio);
  return 2.0 * (il - std::pow(il, 7));
}

double balloon_peak_volume_ratio() { return std::sqrt(7.0); }

double balloon_peak_pressure() {
  // at lambda = 7^{1/6}: (12/7) * 7^{-1/6}
  return 12.0 / 7.0 * std::pow(7.0, -1.0 / 6.0);
}

double droplet_pressure(double volume_ratio) {
  if (volume_ratio <= 0.0) throw std::invalid_argument("volume ratio must be positive");
  return 2.0 * std::cbrt(1.0 / volume_ratio);
}

}  // namespace memfem
