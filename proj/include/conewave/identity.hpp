#pragma once

// Numerical checks of the integral identities behind the uniqueness results.
//
// Potential case (receiver e): with q = q1 - q2, u2 from source 0 and U from
// source e for q1,
//
//   (u1 - u2)(e, tau) = T1 + T2 + T3 + T4,
//   T1 = (1/16 pi^2) Q(tau)                         (singular x singular)
//   T2 = (1/4 pi) int q V(x, tau - |x|) / |x| dx      (singular x smooth)
//   T3 = (1/4 pi) int q v2(x, tau - |x - e|) / |x - e| dx
//   T4 = int int q V(x, tau - t) v2(x, t) dt dx
//
// over the solid |x| + |x - e| <= tau, with Q(2 tau) = int q / |2 tau x - |x| e| dS.
//
// Damping case (receiver 0, radial A_i, A = A2 - A1, rho_i = R_i(r, r),
// phi_i = r v_i) the five terms of u(0, 2 sigma) reduce to
//
//   I1 = -A rho1 rho2 g2 / (16 pi),        g2 = int_0^1 A2(s sigma) ds
//   I2 = rho1 rho2 [A' - A (A1 + A2)/2 + A g2] / (16 pi)
//   I3 = int_0^sigma A rho2 d_t phi1(r, 2 sigma - r) dr + A rho2 phi1 / 2 |_{r = sigma}
//   I4 = int_0^sigma A rho1 d_t phi2(r, 2 sigma - r) dr + A rho1 phi2 / 2 |_{r = sigma}
//   I5 = 4 pi int_0^sigma A [phi2(r, r) phi1(r, 2 sigma - r)
//                           + int_r^{2 sigma - r} d_t phi2(r, t) phi1(r, 2 sigma - t) dt] dr
//
// with I1 + I2 = (A rho1 rho2)'/(16 pi) and I1 + ... + I5 = (v1 - v2)(0, 2 sigma).
// The half-weighted cone terms come from the jump of v_i across t = |x|.

#include <map>
#include <string>
#include <vector>

#include "conewave/geometry.hpp"
#include "conewave/goursat.hpp"
#include "conewave/lippmann_schwinger.hpp"
#include "conewave/profile.hpp"

namespace cw::identity {

struct IdentityReport {
  std::string name;
  std::string grid_name;  // "tau" or "sigma"
  std::vector<double> grid;
  std::vector<double> lhs, rhs, abs_residual;
  double max_abs_residual = 0.0;
  /// max |lhs - rhs| over max(|lhs|, |rhs|); 0 when both sides vanish.
  double rel_residual = 0.0;
  /// Named per-point series (individual terms, bounds).
  std::map<std::string, std::vector<double>> series;
  std::map<std::string, double> scalars;
  std::map<std::string, double> tolerances;
  std::map<std::string, std::string> metadata;

  void finalize();
};

struct PotentialOptions {
  forward::LsOptions ls;
  geometry::QuadratureOrder order{24, 32, 24};
  int n_t = 12;  // Gauss-Legendre nodes for the time integral in T4
};

/// Q(2 tau) by the slice quadrature with the closed-form weight; tau > 1/2.
double compute_Q(const CoefficientProfile& q, double tau, const geometry::QuadratureOrder& order = {});

IdentityReport verify_lemma1(const CoefficientProfile& q1, const CoefficientProfile& q2,
                             const std::vector<double>& tau_grid, const PotentialOptions& opt = {});

/// Checks Q(2 tau)/(16 pi^2) = u(e, 2 tau) - int q F / (|x||x - e|) dx and the
/// bound |Q(2 tau) - 16 pi^2 u(e, 2 tau)| <= K int |q| / (|x||x - e|) dx.
IdentityReport verify_estimate_lemma2(const CoefficientProfile& q1, const CoefficientProfile& q2,
                                      const std::vector<double>& tau_grid,
                                      const PotentialOptions& opt = {});

/// K = 16 pi^2 sup|F| from sampled sup-norms of v2 and V on supp-grid points of
/// {|x| + |x - e| <= T}, times up to T. Sample sets are nested in T.
double lemma2_constant(const forward::LsField& v2, const forward::LsField& V, double T,
                       double spacing = 0.1, double dt = 0.05);

/// -(1/r^2) int_{|x| = r} d_r(phi r^2) dS (delta' taken as d/d|x|), centred
/// differences with step h_r; sphere quadrature n x 2n.
double delta_prime_surface(double r, const geometry::ScalarField& phi, double h_r = 1e-4,
                           int n = 32);
/// Same for delta'(2r - 2|x|): one half of the above.
double delta_prime_surface_scaled(double r, const geometry::ScalarField& phi, double h_r = 1e-4,
                                  int n = 32);

/// D(r) = A(r) R1(r, r) R2(r, 2 sigma - r) and its r-derivative at r = sigma:
/// closed form and Richardson-extrapolated centred difference.
double d_sigma_closed_form(const CoefficientProfile& A1, const CoefficientProfile& A2, double sigma);
double d_sigma_finite_difference(const CoefficientProfile& A1, const CoefficientProfile& A2,
                                 double sigma, double h);

/// exp(2 int_0^sigma int_0^1 A2(s t) ds dt).
double integrating_factor(const CoefficientProfile& A2, double sigma);

struct ITermBreakdown {
  double sigma = 0.0;
  double I1 = 0.0, I2 = 0.0, I3 = 0.0, I4 = 0.0, I5 = 0.0;
  /// (v1 - v2)(0, 2 sigma) from the axis waveforms.
  double data = 0.0;
  double sum_residual = 0.0;  // |I1 + ... + I5 - data|
  /// Mollified-delta evaluations of I1 and I2 (cross-check) and their width.
  double I1_mollified = 0.0, I2_mollified = 0.0, mollifier_width = 0.0;
  /// Per-term error estimates: quadrature halving for I3..I5, the mollifier
  /// discrepancy for I1, I2.
  std::map<std::string, double> error_estimates;
};

/// Goursat fields for a radial damping pair on [0, T].
struct DampingPair {
  DampingPair(const CoefficientProfile& A1, const CoefficientProfile& A2, double T, double h);
  CoefficientProfile A1, A2, A;
  forward::RadialSolution s1, s2;
};

ITermBreakdown iterm_breakdown(const DampingPair& pair, double sigma, int n_quad = 48);
ITermBreakdown iterm_breakdown(const CoefficientProfile& A1, const CoefficientProfile& A2,
                               double sigma, double h = 0.005);

/// Residual of (A rho1 rho2)'(sigma)/(16 pi) = (v1 - v2)(0, 2 sigma) - (I3 + I4 + I5)
/// over sigma_grid. The printed form with the exponential factor is kept in
/// series "literal_lhs"/"literal_rhs" for information.
IdentityReport atilde_ode_residual(const CoefficientProfile& A1, const CoefficientProfile& A2,
                                   const std::vector<double>& sigma_grid, double h = 0.005);

}  // namespace cw::identity
