#pragma once

// Analytic coefficient fixtures shared by the test suites.

#include <cmath>

#include "conewave/profile.hpp"

namespace fixture {

inline cw::CoefficientProfile radial_const(double c, double rmax = 4.0) {
  return cw::CoefficientProfile::radial(cw::Profile1D::analytic(
      [c](double) { return c; }, [](double) { return 0.0; }, 0.0, rmax));
}

inline cw::CoefficientProfile radial_linear(double a0, double slope, double rmax = 4.0) {
  return cw::CoefficientProfile::radial(cw::Profile1D::analytic(
      [=](double r) { return a0 + slope * r; }, [=](double) { return slope; }, 0.0, rmax));
}

/// amp * cos^2(pi r / (2 w)) on [0, w]: C1 with compact support.
inline cw::CoefficientProfile radial_bump(double amp, double w) {
  const double k = M_PI / (2 * w);
  return cw::CoefficientProfile::radial(cw::Profile1D::analytic(
      [=](double r) { return amp * std::pow(std::cos(k * r), 2); },
      [=](double r) { return -amp * k * std::sin(2 * k * r); }, 0.0, w));
}

/// amp * sin^2(pi (s - lo)/(hi - lo)) on [lo, hi], zero on [1 - eps, lo].
inline cw::Profile1D bump_shape(double amp, double lo, double hi, double start = 0.9) {
  const double k = M_PI / (hi - lo);
  return cw::Profile1D::analytic(
      [=](double s) { return s < lo ? 0.0 : amp * std::pow(std::sin(k * (s - lo)), 2); },
      [=](double s) { return s < lo ? 0.0 : amp * k * std::sin(2 * k * (s - lo)); }, start, hi);
}

inline cw::CoefficientProfile ellipsoidal_bump(double amp, double lo = 1.2, double hi = 1.8) {
  return cw::CoefficientProfile::ellipsoidal(bump_shape(amp, lo, hi));
}

}  // namespace fixture

namespace fixture {

/// c on |x| <= r_in, cos^2 taper to 0 at r_out: a C1 stand-in for a constant on a ball.
inline cw::CoefficientProfile radial_plateau(double c, double r_in, double r_out) {
  const double k = M_PI / (2 * (r_out - r_in));
  return cw::CoefficientProfile::radial(cw::Profile1D::analytic(
      [=](double r) { return r <= r_in ? c : c * std::pow(std::cos(k * (r - r_in)), 2); },
      [=](double r) { return r <= r_in ? 0.0 : -c * k * std::sin(2 * k * (r - r_in)); }, 0.0,
      r_out));
}

/// amp cos^2(pi |x - c| / (2 w)) on the ball |x - c| < w; not axisymmetric.
inline cw::CoefficientProfile off_axis_bump(double amp, const cw::Vec3& c, double w) {
  return cw::CoefficientProfile::general(
      [=](const cw::Vec3& x) {
        const double d = (x - c).norm();
        return d >= w ? 0.0 : amp * std::pow(std::cos(M_PI * d / (2 * w)), 2);
      },
      c.norm() + w);
}

}  // namespace fixture
