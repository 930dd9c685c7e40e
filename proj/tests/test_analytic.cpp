#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "memfem/analytic.hpp"

using namespace memfem;

TEST_CASE("balloon pressure curve") {
  CHECK(balloon_pressure(1.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(balloon_pressure(10.0) == doctest::Approx(0.9190345890553302).epsilon(1e-13));

  CHECK(balloon_peak_volume_ratio() == doctest::Approx(2.6457513110645906).epsilon(1e-14));
  CHECK(balloon_peak_pressure() == doctest::Approx(1.2394629023991150).epsilon(1e-13));
  CHECK(balloon_pressure(balloon_peak_volume_ratio()) ==
        doctest::Approx(balloon_peak_pressure()).epsilon(1e-13));

  // rises to the peak, then decays toward zero
  CHECK(balloon_pressure(1.5) > balloon_pressure(1.1));
  CHECK(balloon_pressure(balloon_peak_volume_ratio()) > balloon_pressure(2.0));
  CHECK(balloon_pressure(balloon_peak_volume_ratio()) > balloon_pressure(3.0));
  CHECK(balloon_pressure(1e6) > 0.0);
  CHECK(balloon_pressure(1e6) < 1e-1);

  CHECK_THROWS_AS(balloon_pressure(0.0), std::invalid_argument);
  CHECK_THROWS_AS(balloon_pressure(-1.0), std::invalid_argument);
}

TEST_CASE("droplet pressure curve") {
  CHECK(droplet_pressure(1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(droplet_pressure(4.0) == doctest::Approx(1.2599210498948732).epsilon(1e-13));
  CHECK(droplet_pressure(0.125) == doctest::Approx(4.0).epsilon(1e-14));

  // strictly decreasing and positive
  double prev = droplet_pressure(0.1);
  for (double v = 0.2; v < 8.0; v += 0.1) {
    const double p = droplet_pressure(v);
    CHECK(p > 0.0);
    CHECK(p < prev);
    prev = p;
  }

  CHECK_THROWS_AS(droplet_pressure(0.0), std::invalid_argument);
}
