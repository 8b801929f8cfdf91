#include <cmath>
#include <random>

#include "conewave/error.hpp"
#include "conewave/geometry.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cw;
using namespace cw::geometry;

namespace {
const double kRho2 = std::acosh(2.0);
}

TEST_CASE("prolate_to_cartesian reference points") {
  Vec3 x = prolate_to_cartesian({kRho2, 0.0, 0.0});
  CHECK(x.x == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(std::abs(x.y) < 1e-15);
  CHECK(std::abs(x.z) < 1e-15);

  x = prolate_to_cartesian({kRho2, 0.0, kPi});
  CHECK(x.x == doctest::Approx(-0.5).epsilon(1e-14));

  x = prolate_to_cartesian({kRho2, kPi / 2, kPi / 2});
  CHECK(x.x == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(x.y == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-14));
  CHECK(std::abs(x.z) < 1e-15);
}

TEST_CASE("cartesian_to_prolate inverts reference points") {
  auto r = cartesian_to_prolate({1.5, 0.0, 0.0});
  CHECK(r.point.rho == doctest::Approx(kRho2).epsilon(1e-13));
  CHECK(std::abs(r.point.phi) < 1e-15);
  CHECK(r.degenerate_theta);
  CHECK_FALSE(r.on_focal_segment);

  r = cartesian_to_prolate({0.5, std::sqrt(3.0) / 2, 0.0});
  CHECK(r.point.rho == doctest::Approx(kRho2).epsilon(1e-13));
  CHECK(r.point.theta == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK(r.point.phi == doctest::Approx(kPi / 2).epsilon(1e-14));
}

TEST_CASE("focal segment is flagged, rho still defined") {
  auto r = cartesian_to_prolate({0.3, 0.0, 0.0});
  CHECK(r.on_focal_segment);
  CHECK(r.degenerate_theta);
  CHECK(r.point.theta == 0.0);
  CHECK(std::abs(r.point.rho) < 1e-7);
  CHECK(std::cos(r.point.phi) == doctest::Approx(-0.4).epsilon(1e-12));
}

TEST_CASE("round trip and focal-sum identity on random points") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst_trip = 0.0, worst_sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Vec3 x{u(rng), u(rng), u(rng)};
    const auto p = cartesian_to_prolate(x);
    const Vec3 y = prolate_to_cartesian(p.point);
    worst_trip = std::max(worst_trip, (y - x).norm() / x.norm());
    const double ch = std::cosh(p.point.rho);
    worst_sum = std::max(worst_sum, std::abs(y.norm() + (y - kFocus).norm() - ch) / ch);
  }
  CHECK(worst_trip < 1e-12);
  CHECK(worst_sum < 1e-12);
}

TEST_CASE("surface and volume densities") {
  CHECK(surface_density({kRho2, 0.0, kPi / 2}) == doctest::Approx(std::sqrt(3.0) / 2));
  CHECK(surface_density({kRho2, 0.0, 0.0}) == 0.0);
  CHECK(volume_density({kRho2, 1.0, 0.0}) == 0.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ur(0.05, 2.0), ua(0.05, kPi - 0.05);
  for (int i = 0; i < 1000; ++i) {
    const ProlatePoint p{ur(rng), 2 * ua(rng), ua(rng)};
    const Vec3 x = prolate_to_cartesian(p);
    const double reduced = volume_density(p) / (x.norm() * (x - kFocus).norm());
    REQUIRE(reduced == doctest::Approx(0.5 * std::sinh(p.rho) * std::sin(p.phi)).epsilon(1e-12));
  }
}

TEST_CASE("ellipsoid_weight closed form") {
  CHECK(ellipsoid_weight(1.0, {kRho2, 0.0, kPi / 2}) == doctest::Approx(std::sqrt(3.0)));
  CHECK(ellipsoid_weight(1.0, {kRho2, 0.0, 0.0}) == doctest::Approx(1.5));
  CHECK_THROWS_AS(ellipsoid_weight(0.5, {0.0, 0.0, 0.0}), DomainError);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ut(0.51, 3.0), ua(0.0, kPi);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double tau = ut(rng);
    const ProlatePoint p{std::acosh(2 * tau), 2 * ua(rng), ua(rng)};
    const Vec3 x = prolate_to_cartesian(p);
    const double direct = (x * (2 * tau) - kFocus * x.norm()).norm();
    worst = std::max(worst, std::abs(ellipsoid_weight(tau, p) - direct) / direct);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("surface integral of 1 matches closed-form area and the triangulation oracle") {
  const double exact = 2 * kPi * 0.75 + 2 * kPi * std::sqrt(3.0) / 2 * std::asin(0.5) / 0.5;
  CHECK(spheroid_area(1.0) == doctest::Approx(exact).epsilon(1e-14));
  CHECK(exact == doctest::Approx(10.4104).epsilon(1e-4));

  const double mesh = oracle::richardson(
      oracle::triangulated_surface_integral(1.0, [](const Vec3&) { return 1.0; }, 200),
      oracle::triangulated_surface_integral(1.0, [](const Vec3&) { return 1.0; }, 400));
  CHECK(mesh == doctest::Approx(exact).epsilon(1e-6));

  const double quad = surface_integral(1.0, [](const Vec3&) { return 1.0; });
  CHECK(quad == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("surface quadrature converges with order >= 2 before hitting roundoff") {
  auto one = [](const Vec3&) { return 1.0; };
  const double exact = spheroid_area(1.0);
  double prev = 0.0;
  for (int n = 2; n <= 8; n *= 2) {
    const double err = std::abs(surface_integral(1.0, one, {n, 8, 1}) - exact);
    if (prev > 0.0 && err > 1e-14) CHECK(std::log2(prev / err) >= 2.0);
    prev = err;
  }
}

TEST_CASE("Q of a constant is 2 pi c") {
  const double c = 0.7, tau = 1.3;
  auto f = [&](const Vec3& x) { return c / (x * (2 * tau) - kFocus * x.norm()).norm(); };
  CHECK(surface_integral(tau, f) == doctest::Approx(2 * kPi * c).epsilon(1e-12));
  const double mesh = oracle::richardson(oracle::triangulated_surface_integral(tau, f, 200),
                                         oracle::triangulated_surface_integral(tau, f, 400));
  CHECK(mesh == doctest::Approx(2 * kPi * c).epsilon(1e-5));
}

TEST_CASE("volume integrals") {
  auto one = [](const Vec3&) { return 1.0; };
  CHECK(volume_integral(1.0, one) == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(spheroid_volume(1.0) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(oracle::monte_carlo_volume(1.0, one, 400000, 5) == doctest::Approx(kPi).epsilon(1e-2));

  // 1/(|x||x-e|) integrates to 2 pi (2 tau - 1): the reduced density 1/2 sinh(rho) sin(phi)
  // integrated in rho gives cosh(rho_max) - 1.
  auto w = [](const Vec3& x) { return 1.0 / (x.norm() * (x - kFocus).norm()); };
  CHECK(volume_integral(1.0, w) == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(oracle::monte_carlo_volume(1.0, w, 2000000, 9) == doctest::Approx(2 * kPi).epsilon(0.03));
}

TEST_CASE("non-finite integrand names the node") {
  auto bad = [](const Vec3& x) { return x.x > 1.4 ? NAN : 1.0; };
  try {
    surface_integral(1.0, bad, {8, 8, 1});
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
}

TEST_CASE("serial and parallel quadrature agree bit for bit") {
  auto f = [](const Vec3& x) { return std::exp(-x.dot(x)) * (1 + x.y); };
  CHECK(surface_integral(1.2, f, {}, Exec::serial) == surface_integral(1.2, f, {}, Exec::parallel));
  CHECK(volume_integral(1.2, f, {}, Exec::serial) == volume_integral(1.2, f, {}, Exec::parallel));
}
