#pragma once

// Independent check on the forward solvers: explicit leapfrog for the full
// field u with a mollified source delta_eps(x - source) delta_eps(t).
//
// A source at the origin with a radial (or zero) coefficient runs the 1+1D
// reduction psi = r u; everything else runs a small Cartesian grid. The smooth
// part is u minus R(x, t) times the free mollified field computed on the same
// grid, so the front is removed up to O(eps) blur.

#include "conewave/goursat.hpp"
#include "conewave/profile.hpp"
#include "conewave/quadrature.hpp"
#include "conewave/waveform.hpp"

namespace cw::forward {

struct FdOptions {
  double h = 0.01;
  /// Mollifier half-width in space and time; must span at least 4 cells.
  double eps = 0.05;
  /// dt = cfl * h (1D) or cfl * h / sqrt(3) (3D); at most 0.9.
  double cfl = 0.5;
  Exec exec = Exec::parallel;
  /// Return the full mollified field instead of the smooth part.
  bool total_field = false;
};

/// Compactly supported mollifiers: (1 + cos(pi t / eps)) / (2 eps) on |t| < eps,
/// and the unit-mass 3D bump proportional to cos^2(pi |x| / (2 eps)).
double mollifier_1d(double t, double eps);
double mollifier_3d(double r, double eps);

ReceiverWaveform fd_oracle_solve(const CoefficientProfile& q, Kind kind, const Vec3& source,
                                 const Vec3& receiver, double T, const FdOptions& opt = {});

}  // namespace cw::forward
