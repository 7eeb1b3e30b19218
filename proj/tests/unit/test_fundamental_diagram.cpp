#include <doctest.h>

#include <cmath>

#include "diverge/errors.hpp"
#include "diverge/fundamental_diagram.hpp"
#include "diverge/supply_demand.hpp"
#include "support/generators.hpp"

using namespace diverge;
using doctest::Approx;

namespace {

// Golden-section search for the maximiser of Q, written apart from the library.
double golden_argmax(const FundamentalDiagram& fd) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = fd.jam_density();
  for (int i = 0; i < 200; ++i) {
    const double c = b - r * (b - a);
    const double d = a + r * (b - a);
    if (fd.flow(c) > fd.flow(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("del Castillo flows at the reference densities") {
  const auto main = FundamentalDiagram::del_castillo_mainline();
  const auto ramp = FundamentalDiagram::del_castillo_ramp();
  CHECK(std::abs(main.flow(1.0) - 0.2473) < 5e-5);
  CHECK(main.flow(0.0) == 0.0);
  CHECK(std::abs(ramp.flow(0.1) - 0.0500) < 5e-5);
  CHECK(main.flow(main.jam_density()) == Approx(0.0).epsilon(1e-15));
}

TEST_CASE("critical densities and capacities") {
  const auto main = FundamentalDiagram::del_castillo_mainline();
  const auto ramp = FundamentalDiagram::del_castillo_ramp();
  CHECK(std::abs(main.critical_density() - 0.4876) < 5e-5);
  CHECK(std::abs(ramp.critical_density() - 0.2438) < 5e-5);
  CHECK(std::abs(main.capacity() - 0.3365) < 5e-5);
  CHECK(std::abs(ramp.capacity() - 0.0841) < 5e-5);
  CHECK(FundamentalDiagram::greenshields(1.0, 1.0).critical_density() == Approx(0.5).epsilon(1e-12));

  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    testing::Gen g(seed);
    const auto fd = g.diagram();
    const double rc = golden_argmax(fd);
    // The maximiser is flat to first order, so compare values of Q tightly
    // and positions loosely.
    CHECK(fd.flow(fd.critical_density()) >= fd.flow(rc) - 1e-14);
    CHECK(fd.capacity() == Approx(fd.flow(fd.critical_density())).epsilon(1e-14));
    CHECK(std::abs(fd.critical_density() - rc) < 1e-6);
  }
}

TEST_CASE("demand and supply") {
  const auto main = FundamentalDiagram::del_castillo_mainline();
  const auto ramp = FundamentalDiagram::del_castillo_ramp();
  CHECK(std::abs(main.demand(1.0) - 0.3365) < 5e-5);
  CHECK(std::abs(ramp.demand(0.1) - 0.0500) < 5e-5);
  CHECK(main.demand(0.0) == 0.0);
  CHECK(std::abs(main.supply(1.0) - 0.2473) < 5e-5);
  CHECK(std::abs(ramp.supply(0.1) - 0.0841) < 5e-5);
  CHECK(main.supply(main.critical_density()) == main.capacity());
  CHECK(main.demand(main.critical_density()) == main.capacity());
}

TEST_CASE("density recovered from a state") {
  const auto main = FundamentalDiagram::del_castillo_mainline();
  const auto ramp = FundamentalDiagram::del_castillo_ramp();
  CHECK(main.density_from_state({main.capacity(), main.flow(1.0)}) == Approx(1.0).epsilon(1e-8));
  CHECK(ramp.density_from_state({ramp.capacity(), ramp.capacity()}) ==
        Approx(ramp.critical_density()).epsilon(1e-9));
  CHECK(std::abs(ramp.density_from_state({ramp.capacity(), ramp.capacity()}) - 0.2438) < 5e-4);
  CHECK(main.density_from_state({0.0, main.capacity()}) == 0.0);
  CHECK_THROWS_AS((void)main.density_from_state({0.1, 0.2}), InvalidStateError);
}

TEST_CASE("domain and parameter errors") {
  const auto main = FundamentalDiagram::del_castillo_mainline();
  CHECK_THROWS_AS((void)main.flow(-1e-3), DomainError);
  CHECK_THROWS_AS((void)main.flow(2.001), DomainError);
  CHECK_THROWS_AS((void)main.demand(3.0), DomainError);
  CHECK_THROWS_AS((void)main.supply(-0.5), DomainError);
  CHECK_THROWS_AS(FundamentalDiagram::greenshields(0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(FundamentalDiagram::greenshields(1.0, -1.0), ParameterError);
}

TEST_CASE("diagram properties on random diagrams") {
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    testing::Gen g(seed);
    const auto fd = g.diagram();
    const double rj = fd.jam_density();
    CHECK(fd.flow(0.0) == 0.0);
    CHECK(std::abs(fd.flow(rj)) < 1e-12);
    double prev_d = -1.0;
    double prev_s = 2.0 * fd.capacity();
    double prev_q = -1.0;
    double prev_rho = 0.0;
    for (int k = 0; k <= 400; ++k) {
      const double rho = std::min(rj, rj * k / 400.0);
      const double q = fd.flow(rho);
      const double d = fd.demand(rho);
      const double s = fd.supply(rho);
      CHECK(std::min(d, s) == Approx(q).epsilon(1e-14));
      CHECK(std::max(d, s) == Approx(fd.capacity()).epsilon(1e-14));
      CHECK(d >= prev_d - 1e-15);
      CHECK(s <= prev_s + 1e-15);
      // Unimodality: nondecreasing below critical, nonincreasing above.
      if (rho <= fd.critical_density()) {
        CHECK(q >= prev_q - 1e-15);
      } else if (prev_rho >= fd.critical_density()) {
        CHECK(q <= prev_q + 1e-15);
      }
      prev_rho = rho;
      prev_d = d;
      prev_s = s;
      prev_q = q;
      CHECK(std::abs(fd.density_from_state(state_of(fd, rho)) - rho) < 1e-8);
    }
  }
}
