#include <doctest.h>

#include <cmath>

#include "conewave/error.hpp"
#include "conewave/fd_oracle.hpp"
#include "conewave/greens.hpp"
#include "profiles.hpp"

using namespace cw;
using forward::Kind;

TEST_CASE("mollifiers have unit mass") {
  const double eps = 0.1;
  const auto g = gauss_legendre(64, -eps, eps);
  double m1 = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) m1 += g.weights[i] * forward::mollifier_1d(g.nodes[i], eps);
  CHECK(m1 == doctest::Approx(1.0).epsilon(1e-12));
  const auto r = gauss_legendre(64, 0.0, eps);
  double m3 = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i)
    m3 += r.weights[i] * 4 * kPi * r.nodes[i] * r.nodes[i] * forward::mollifier_3d(r.nodes[i], eps);
  CHECK(m3 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero coefficient leaves no smooth part") {
  forward::FdOptions o;
  o.h = 0.01;
  o.eps = 0.05;
  const auto w = forward::fd_oracle_solve(CoefficientProfile::zero(), Kind::potential, Vec3{},
                                          kFocus, 1.5, o);
  CHECK(w.sup_norm() == 0.0);
  CHECK(w.params.at("grid") == "radial1d");
}

TEST_CASE("free front arrives at the receiver distance") {
  forward::FdOptions o;
  o.h = 0.005;
  o.eps = 0.05;
  o.total_field = true;
  const auto w = forward::fd_oracle_solve(CoefficientProfile::zero(), Kind::potential, Vec3{},
                                          kFocus, 1.5, o);
  std::size_t peak = 0;
  for (std::size_t k = 0; k < w.values.size(); ++k)
    if (w.values[k] > w.values[peak]) peak = k;
  CHECK(std::abs(w.time(peak) - 1.0) <= o.h);
  // Mass of the front: int u dt = 1 / (4 pi |x|).
  double mass = 0.0;
  for (double v : w.values) mass += v * w.dt;
  CHECK(mass == doctest::Approx(1.0 / (4 * kPi)).epsilon(0.01));
}

TEST_CASE("cone trace extracted from the potential field") {
  const auto q = fixture::radial_bump(1.0, 1.2);
  const double r0 = 0.5;
  forward::FdOptions o;
  o.h = 0.0025;
  o.eps = 0.02;
  const auto w = forward::fd_oracle_solve(q, Kind::potential, Vec3{}, Vec3{r0, 0, 0}, 1.0, o);
  // Linear extrapolation to t = r0 from the clean region t >= r0 + 4 eps.
  const double t1 = r0 + 4 * o.eps, t2 = r0 + 8 * o.eps;
  const double v1 = w.at(t1), v2 = w.at(t2);
  const double trace = v1 - (v2 - v1) * (t1 - r0) / (t2 - t1);
  const double exact = greens::goursat_trace_potential(q, Vec3{r0, 0, 0});
  INFO("trace " << trace << " exact " << exact);
  CHECK(std::abs(trace - exact) <= 0.03 * std::abs(exact));
}

TEST_CASE("Cartesian grid agrees with the radial reduction") {
  const auto q = fixture::radial_bump(2.0, 0.8);
  forward::FdOptions o;
  o.h = 0.04;
  o.eps = 0.16;
  o.cfl = 0.8;
  const Vec3 rec{0.5, 0.2, 0.0};
  const auto w1 = forward::fd_oracle_solve(q, Kind::potential, Vec3{}, rec, 1.2, o);
  const auto wq = forward::fd_oracle_solve(
      CoefficientProfile::general([&q](const Vec3& x) { return q(x); }, 0.8), Kind::potential,
      Vec3{}, rec, 1.2, o);
  CHECK(w1.params.at("grid") == "radial1d");
  CHECK(wq.params.at("grid") == "cartesian3d");
  const double scale = w1.sup_norm();
  CHECK(sup_difference(w1, wq, rec.norm() + 2 * o.eps) <= 0.1 * scale);

  o.exec = Exec::serial;
  const auto ws = forward::fd_oracle_solve(
      CoefficientProfile::general([&q](const Vec3& x) { return q(x); }, 0.8), Kind::potential,
      Vec3{}, rec, 1.2, o);
  CHECK(ws.values == wq.values);
}

TEST_CASE("oracle preconditions") {
  forward::FdOptions o;
  o.cfl = 0.95;
  CHECK_THROWS_AS(forward::fd_oracle_solve(CoefficientProfile::zero(), Kind::damping, Vec3{},
                                           kFocus, 1.0, o),
                  DomainError);
  o.cfl = 0.5;
  o.eps = 2 * o.h;
  CHECK_THROWS_AS(forward::fd_oracle_solve(CoefficientProfile::zero(), Kind::damping, Vec3{},
                                           kFocus, 1.0, o),
                  DomainError);
}
