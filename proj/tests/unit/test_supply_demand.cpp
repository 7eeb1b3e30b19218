#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "diverge/errors.hpp"
#include "diverge/supply_demand.hpp"
#include "support/generators.hpp"

using namespace diverge;

TEST_CASE("state_of at the reference densities") {
  const auto main = FundamentalDiagram::del_castillo_mainline();
  const auto ramp = FundamentalDiagram::del_castillo_ramp();
  const TrafficState u0 = state_of(main, 1.0);
  CHECK(std::abs(u0.demand - 0.3365) < 5e-5);
  CHECK(std::abs(u0.supply - 0.2473) < 5e-5);
  const TrafficState u2 = state_of(ramp, 0.1);
  CHECK(std::abs(u2.demand - 0.0500) < 5e-5);
  CHECK(std::abs(u2.supply - 0.0841) < 5e-5);
  const TrafficState uc = state_of(main, 0.4876);
  CHECK(std::abs(uc.demand - 0.3365) < 5e-5);
  CHECK(std::abs(uc.supply - 0.3365) < 5e-5);
}

TEST_CASE("local flux is the smaller component") {
  CHECK(local_flux({0.3365, 0.2473}) == 0.2473);
  CHECK(local_flux({0.0, 0.3365}) == 0.0);
  CHECK(local_flux({0.0500, 0.0841}) == 0.0500);
}

TEST_CASE("classification") {
  CHECK(classify({0.3365, 0.2473}, 0.3365) == Criticality::StrictlyOverCritical);
  CHECK(classify({0.0500, 0.0841}, 0.0841) == Criticality::StrictlyUnderCritical);
  CHECK(classify({0.3365, 0.3365}, 0.3365) == Criticality::Critical);
  CHECK(classify({0.3365, 0.3365 - 5e-13}, 0.3365) == Criticality::Critical);
  CHECK_THROWS_AS(classify({0.1, 0.2}, 0.3365), InvalidStateError);
  CHECK(is_under_critical(Criticality::Critical));
  CHECK(is_over_critical(Criticality::Critical));
  CHECK(is_under_critical(Criticality::StrictlyUnderCritical));
  CHECK_FALSE(is_over_critical(Criticality::StrictlyUnderCritical));
  CHECK_FALSE(is_under_critical(Criticality::StrictlyOverCritical));
}

TEST_CASE("classification agrees with the density comparison") {
  for (std::uint64_t seed = 7; seed < 47; ++seed) {
    testing::Gen g(seed);
    const auto fd = g.diagram();
    for (int k = 0; k <= 200; ++k) {
      const double rho = std::min(fd.jam_density(), fd.jam_density() * k / 200.0);
      const TrafficState u = state_of(fd, rho);
      const Criticality c = classify(u, fd.capacity());
      const double gap = std::abs(u.demand - u.supply);
      if (gap < kFluxTolerance) continue;
      if (rho < fd.critical_density()) {
        CHECK(c == Criticality::StrictlyUnderCritical);
      } else {
        CHECK(c == Criticality::StrictlyOverCritical);
      }
      CHECK(local_flux(u) == fd.flow(rho));
    }
  }
}
