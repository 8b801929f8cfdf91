#include <doctest.h>

#include <cmath>

#include "conewave/error.hpp"
#include "conewave/goursat.hpp"
#include "conewave/greens.hpp"
#include "profiles.hpp"

using namespace cw;
using forward::Kind;

namespace {

// phi* = sin(r) g(t) solves the radial equation with the residual source below.
double g(double t) { return std::exp(-0.3 * t) * (1 + t); }
double g1(double t) { return std::exp(-0.3 * t) * (0.7 - 0.3 * t); }
double g2(double t) { return std::exp(-0.3 * t) * (-0.51 + 0.09 * t); }

struct Manufactured {
  Kind kind;
  CoefficientProfile c;
  double coef(double r) const { return c(Vec3{r, 0, 0}); }
  double source(double r, double t) const {
    const double base = std::sin(r) * (g2(t) + g(t));
    return kind == Kind::damping ? base + coef(r) * std::sin(r) * g1(t)
                                 : base - coef(r) * std::sin(r) * g(t);
  }
};

struct Errors {
  double axis = 0.0, interior = 0.0;
};

Errors manufactured_errors(const Manufactured& m, double h) {
  forward::RadialProblem p;
  p.kind = m.kind;
  p.coefficient = m.c;
  p.T = 2.0;
  p.h = h;
  p.source = [&m](double r, double t) { return m.source(r, t); };
  p.cone_phi = [](double r) { return std::sin(r) * g(r); };
  const auto sol = forward::radial_goursat_solve(p);
  Errors e;
  for (std::size_t k = 0; k < sol.at_origin.values.size(); ++k)
    e.axis = std::max(e.axis, std::abs(sol.at_origin.values[k] - g(sol.at_origin.time(k))));
  for (double r : {0.1, 0.3, 0.5, 0.8})
    for (double t = r; t + r <= 2.0; t += 0.1)
      e.interior = std::max(e.interior, std::abs(sol.field.phi(r, t) - std::sin(r) * g(t)));
  return e;
}

}  // namespace

TEST_CASE("zero damping gives a zero smooth part") {
  const auto sol = forward::radial_damping_solve(CoefficientProfile::zero(), 2.0, 0.05);
  CHECK(sol.at_origin.values.size() == 41);
  CHECK(sol.at_origin.sup_norm() == 0.0);
  CHECK(sol.at_origin.solver == "goursat");
}

TEST_CASE("manufactured solution converges at second order") {
  for (Kind kind : {Kind::damping, Kind::potential}) {
    Manufactured m{kind, fixture::radial_linear(0.2, 0.1)};
    const Errors a = manufactured_errors(m, 0.04), b = manufactured_errors(m, 0.02),
                 c = manufactured_errors(m, 0.01);
    INFO("kind " << forward::to_string(kind) << " axis " << a.axis << " " << b.axis << " "
                 << c.axis << " interior " << a.interior << " " << b.interior << " " << c.interior);
    CHECK(a.axis / b.axis == doctest::Approx(4.0).epsilon(0.25));
    CHECK(b.axis / c.axis == doctest::Approx(4.0).epsilon(0.2));
    CHECK(b.interior / c.interior == doctest::Approx(4.0).epsilon(0.2));
    CHECK(c.axis < 1e-4);
  }
}

TEST_CASE("cone values reproduce the closed-form traces") {
  const auto A = fixture::radial_linear(0.3, -0.1);
  const auto sol = forward::radial_damping_solve(A, 1.0, 0.05);
  for (int j = 1; j <= sol.field.max_sum(); ++j) {
    const double r = 0.5 * j * 0.05;
    CHECK(std::abs(sol.field.node(0, j) - r * greens::goursat_trace_damping(A, r)) < 1e-10);
    CHECK(std::abs(sol.field.phi(r, r) / r - greens::goursat_trace_damping(A, r)) < 1e-10);
  }
  CHECK(sol.at_origin.values[0] == doctest::Approx(greens::goursat_trace_damping(A, 0.0)).epsilon(1e-3));

  forward::RadialProblem p;
  p.kind = Kind::potential;
  p.coefficient = fixture::radial_bump(0.5, 1.0);
  p.T = 1.0;
  p.h = 0.05;
  const auto pot = forward::radial_goursat_solve(p);
  for (int j = 1; j <= pot.field.max_sum(); ++j) {
    const double r = 0.5 * j * 0.05;
    CHECK(std::abs(pot.field.node(0, j) / r -
                   greens::goursat_trace_potential(p.coefficient, Vec3{r, 0, 0})) < 1e-10);
  }
}

TEST_CASE("truncating T leaves shared nodes bit-identical") {
  const auto A = fixture::radial_bump(0.4, 1.5);
  const auto short_run = forward::radial_damping_solve(A, 1.0, 0.025);
  const auto long_run = forward::radial_damping_solve(A, 2.0, 0.025);
  for (std::size_t k = 0; k < short_run.at_origin.values.size(); ++k)
    CHECK(short_run.at_origin.values[k] == long_run.at_origin.values[k]);
}

TEST_CASE("interpolant and derivative") {
  const auto A = fixture::radial_const(0.2);
  const auto sol = forward::radial_damping_solve(A, 2.0, 0.01);
  CHECK(sol.field.phi(0.5, 0.3) == 0.0);
  CHECK(sol.field.phi(0.0, 1.0) == 0.0);
  CHECK(sol.field.v(0.0, 1.0) == doctest::Approx(sol.at_origin.at(1.0)));
  const double fd = (sol.field.phi(0.4, 1.01) - sol.field.phi(0.4, 0.99)) / 0.02;
  CHECK(sol.field.dphi_dt(0.4, 1.0) == doctest::Approx(fd).epsilon(1e-6));
  CHECK_THROWS_AS(sol.field.phi(0.5, 2.5), DomainError);
}

TEST_CASE("preconditions and the Richardson check") {
  const auto A = fixture::radial_const(0.2);
  CHECK_THROWS_AS(forward::radial_damping_solve(A, 1.0, 0.3), DomainError);
  CHECK_THROWS_AS(forward::radial_damping_solve(fixture::ellipsoidal_bump(0.1), 1.0, 0.1),
                  DomainError);
  const auto ok = forward::radial_damping_solve(fixture::radial_bump(2.0, 1.0), 2.0, 0.01, 1e-3);
  CHECK(ok.richardson_error >= 0.0);
  CHECK(ok.richardson_error < 1e-3);
  CHECK_THROWS_AS(forward::radial_damping_solve(fixture::radial_bump(2.0, 1.0), 2.0, 0.25, 1e-7),
                  NonConvergence);
  CHECK_THROWS_AS(forward::kind_from_string("viscous"), ConfigError);
}
