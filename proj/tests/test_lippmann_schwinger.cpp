#include <doctest.h>

#include <cmath>

#include "conewave/error.hpp"
#include "conewave/fd_oracle.hpp"
#include "conewave/geometry.hpp"
#include "conewave/goursat.hpp"
#include "conewave/greens.hpp"
#include "conewave/lippmann_schwinger.hpp"
#include "profiles.hpp"

using namespace cw;
using forward::Kind;

TEST_CASE("zero potential has no smooth part") {
  const auto w = forward::lippmann_schwinger_solve(CoefficientProfile::zero(), Vec3{}, kFocus, 2.0);
  CHECK(w.sup_norm() == 0.0);
  CHECK_THROWS_AS(forward::lippmann_schwinger_solve(CoefficientProfile::zero(), kFocus, kFocus, 2.0),
                  DomainError);
}

TEST_CASE("Born term is the weighted surface integral") {
  const auto q = fixture::off_axis_bump(0.5, Vec3{0.5, 0.2, -0.1}, 0.6);
  forward::LsOptions o;
  o.n_u = 64;
  o.n_theta = 64;
  o.n_psi = 4;
  o.n_r = 6;
  o.n_mu = 5;
  o.d_sigma = 0.5;
  const forward::LsField field(q, Vec3{}, 3.0, o);
  geometry::QuadratureOrder ord;
  ord.n_phi = 96;
  ord.n_theta = 96;
  for (double tau : {0.6, 0.8, 1.0, 1.2}) {
    const double oracle =
        geometry::surface_integral(
            tau, [&](const Vec3& x) { return q(x) / (2 * tau * x - x.norm() * kFocus).norm(); }, ord) /
        (16 * kPi * kPi);
    INFO("tau " << tau);
    CHECK(field.born(kFocus, 2 * tau) == doctest::Approx(oracle).epsilon(1e-6));
  }
  // At the arrival the Born term is the cone trace.
  CHECK(field.born(kFocus, 1.0) ==
        doctest::Approx(greens::goursat_trace_potential(q, kFocus)).epsilon(1e-6));
}

TEST_CASE("radial potential agrees with the characteristic solver") {
  const auto q = fixture::radial_bump(1.0, 1.0);
  forward::RadialProblem p;
  p.kind = Kind::potential;
  p.coefficient = q;
  p.T = 3.0;
  p.h = 0.005;
  const auto g = forward::radial_goursat_solve(p);
  forward::LsOptions o;
  o.d_sigma = 0.05;
  const forward::LsField field(q, Vec3{}, 3.0, o);
  for (double r0 : {0.3, 0.7, 1.2}) {
    double err = 0.0, scale = 0.0;
    for (double t = r0; t <= 3.0 - r0; t += 0.05) {
      const double ref = g.field.v(r0, t);
      err = std::max(err, std::abs(field.v(Vec3{0, r0, 0}, t) - ref));
      scale = std::max(scale, std::abs(ref));
    }
    INFO("r0 " << r0 << " err " << err << " scale " << scale << " iterations " << field.iterations());
    CHECK(scale > 0.0);
    CHECK(err <= 0.02 * scale);
  }
}

TEST_CASE("small plateau potential agrees with the FD oracle at e") {
  const auto q = fixture::radial_plateau(0.1, 0.8, 1.0);
  const auto ls = forward::lippmann_schwinger_solve(q, Vec3{}, kFocus, 3.0);
  forward::FdOptions o;
  o.h = 0.0025;
  o.eps = 0.02;
  const auto fd = forward::fd_oracle_solve(q, Kind::potential, Vec3{}, kFocus, 3.0, o);
  const double err = sup_difference(ls, fd, 1.0 + 6 * o.eps);
  INFO("err " << err << " scale " << ls.sup_norm());
  CHECK(err <= 0.05 * ls.sup_norm());
  CHECK(ls.params.at("iterations") != "0");
  for (std::size_t k = 0; k < ls.values.size(); ++k)
    if (ls.time(k) < 1.0 - 1e-12) CHECK(ls.values[k] == 0.0);
}

TEST_CASE("Born consistency: the remainder is quadratic in q") {
  const auto q1 = fixture::radial_bump(0.05, 0.9);
  const auto q2 = fixture::radial_bump(0.10, 0.9);
  forward::LsOptions o;
  o.d_sigma = 0.1;
  const forward::LsField f1(q1, Vec3{}, 2.5, o), f2(q2, Vec3{}, 2.5, o);
  double r1 = 0.0, r2 = 0.0;
  for (double t = 1.0; t <= 2.5; t += 0.1) {
    r1 = std::max(r1, std::abs(f1.v(kFocus, t) - f1.born(kFocus, t)));
    r2 = std::max(r2, std::abs(f2.v(kFocus, t) - f2.born(kFocus, t)));
  }
  INFO("ratio " << r2 / r1);
  CHECK(r2 / r1 >= 3.5);
  CHECK(r2 / r1 <= 4.5);
}

TEST_CASE("sweeps and execution modes") {
  const auto q = fixture::radial_bump(0.8, 1.0);
  forward::LsOptions o;
  o.d_sigma = 0.1;
  o.exec = Exec::serial;
  const forward::LsField serial(q, Vec3{}, 2.0, o);
  o.exec = Exec::parallel;
  const forward::LsField parallel(q, Vec3{}, 2.0, o);
  o.sweep = forward::Sweep::gauss_seidel;
  const forward::LsField gs(q, Vec3{}, 2.0, o);
  CHECK(serial.waveform(kFocus).values == parallel.waveform(kFocus).values);
  CHECK(gs.iterations() < parallel.iterations());
  CHECK(sup_difference(gs.waveform(kFocus), parallel.waveform(kFocus)) <=
        1e-7 * parallel.waveform(kFocus).sup_norm());
  const auto& h = parallel.residual_history();
  CHECK(h.size() == static_cast<std::size_t>(parallel.iterations()));
  CHECK(h.back() <= 1e-9);
}

TEST_CASE("non-convergence carries the residual history") {
  const auto q = fixture::radial_bump(8.0, 1.0);
  forward::LsOptions o;
  o.d_sigma = 0.1;
  o.max_iterations = 5;
  try {
    forward::LsField f(q, Vec3{}, 3.0, o);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.history().size() == 5);
    CHECK(e.history().back() > 1e-9);
  }
}
