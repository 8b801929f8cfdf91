#pragma once

// Layer-marching reconstructors.
//
// Ellipsoidal potential q = a(|x| + |x - e|), source at 0, receiver at e.
// The smooth receiver trace splits as
//
//   v(e, s) = a(s)/(8 pi) + C(s),
//
// where the Born surface term a(s)/(8 pi) comes from the ellipsoid
// |y| + |y - e| = s and C(s) depends on a only through the solid it bounds.
// Marching in s with step delta, each layer solves the scalar fixed point
// a(s) <- a(s) + w 8 pi (d(s) - v_pred(e, s)) against a forward solve of the
// current partial profile, run to time s only.
//
// Radial damping A(|x|), receiver at the source. The Goursat field for the
// partial profile is extended column by column; at r = l delta the value
// A(r) is found by a secant root-find so that the predicted v(0, 2r) matches
// d(2r). A is piecewise linear between layers and A(0) is an input. Cone data
// use the closed form
//
//   phi(r, r) = -(R(r) / 8 pi) [ (A(r) - A(0))/2 - 1/4 int_0^r A^2 ],
//   R(r) = exp(-1/2 int_0^r A),
//
// which follows from (P R)/R = A'/2 - A^2/4 on the cone.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "conewave/lippmann_schwinger.hpp"
#include "conewave/profile.hpp"
#include "conewave/waveform.hpp"

namespace cw::inversion {

struct InversionConfig {
  /// Layer step in s (ellipsoidal) or r (radial).
  double delta = 0.05;
  /// Per-layer data residual tolerance (absolute, data units).
  double tolerance = 1e-9;
  int max_iterations = 30;
  /// Fixed-point relaxation for the ellipsoidal march.
  double relaxation = 1.0;
  /// Forward resolution: LS options for the ellipsoidal march and the
  /// Goursat step for the radial one (delta must be a multiple of it).
  forward::LsOptions ls;
  double goursat_step = 0.01;
  /// Guards divisions by attenuation products.
  double floor = 1e-300;
};

struct ReconstructionResult {
  CoefficientProfile profile = CoefficientProfile::zero();
  std::vector<double> layers;     // s_j or r_j
  std::vector<double> values;     // a(s_j) or A(r_j)
  std::vector<double> residuals;  // final data residual per layer
  std::vector<int> iterations;
  bool converged = true;
  /// Recovered profile is valid on [valid_from, valid_to].
  double valid_from = 0.0, valid_to = 0.0;
  std::string kind;
};

/// d: smooth part of u(e, t) for the source at 0, known on [0, T].
/// Throws NonConvergence naming the layer when a fixed point diverges.
ReconstructionResult reconstruct_ellipsoidal_potential(const ReceiverWaveform& d,
                                                       const InversionConfig& cfg = {});

/// d: smooth part of u(0, t), known on [0, T]; A0 = A(0).
ReconstructionResult reconstruct_radial_damping(const ReceiverWaveform& d, double A0,
                                                const InversionConfig& cfg = {});

/// Piecewise-linear radial damping through (r_l, A_l), zero beyond the last
/// node; the same interpolant the radial reconstructor uses.
CoefficientProfile piecewise_linear_radial(const std::vector<double>& r, const std::vector<double>& A);

/// Goursat cone value phi(r, r) for the piecewise-linear damping above.
double cone_phi_piecewise_linear(const std::vector<double>& r, const std::vector<double>& A,
                                 double at);

struct ProbeReport {
  double T = 0.0;
  double data_difference = 0.0;  // sup over [0, T] of |v1 - v2| at e
  double noise_floor = 0.0;
  double ratio = 0.0;
  bool differ_inside = false;  // q1 != q2 somewhere with |x| + |x - e| <= T
  bool distinguished = false;  // data_difference > noise_floor
  std::vector<double> tau, Q, Q_cumulative;  // Q(2 tau) and its running integral, 2 tau <= T
};

/// Requires q1 >= q2 on a sample lattice (DomainError otherwise).
ProbeReport monotone_distinguishability_probe(const CoefficientProfile& q1,
                                              const CoefficientProfile& q2, double T,
                                              const forward::LsOptions& ls = {});

/// Adds N(0, sigma^2) noise with sigma = sup|d| / snr; deterministic per seed.
ReceiverWaveform add_gaussian_noise(const ReceiverWaveform& d, double snr, std::uint64_t seed);

}  // namespace cw::inversion
