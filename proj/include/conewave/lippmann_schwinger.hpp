#pragma once

// Time-domain Lippmann-Schwinger solver for (box - q) u = delta(x - s) delta(t).
//
// With u = delta(t - |x - s|)/(4 pi |x - s|) + v, the smooth part satisfies
//
//   v(x, t) = B(x, t) + (1/4 pi) int dp int du int dtheta |y - s| q(y) V(y, t - 2p),
//   B(x, t) = (1/32 pi^2) int du int dtheta q(y)|_{p = t/2},
//
// in prolate coordinates with foci s and x (a = |x - s|, p in [a/2, t/2]):
//
//   y = s + (a/2 + p u) n + sqrt(p^2 - a^2/4) sqrt(1 - u^2) (cos theta m1 + sin theta m2),
//   |y - s| = p + a u/2,  |x - y| = p - a u/2,  dy = |y - s| |x - y| dp du dtheta,
//
// and V(y, sigma) = v(y, |y - s| + sigma) is the field in retarded time. The
// retarded argument t - 2p does not depend on (u, theta), so on nodes the
// p-integral is a trapezoid sum over stored sigma levels and each (node,
// level offset) pair reduces to a fixed sparse stencil on the spatial grid.
//
// V is stored on a spherical grid (r, mu = cos of the angle to the x1 axis,
// azimuth psi) covering supp q; psi collapses to a single node when q is
// axisymmetric about the x1 axis and s lies on it.

#include <vector>

#include "conewave/profile.hpp"
#include "conewave/quadrature.hpp"
#include "conewave/waveform.hpp"

namespace cw::forward {

enum class Sweep { picard, gauss_seidel };

std::string to_string(Sweep s);
Sweep sweep_from_string(const std::string& s);

struct LsOptions {
  double d_sigma = 0.05;  // rounded down so that it divides T
  int n_r = 16;
  int n_mu = 17;
  int n_psi = 8;  // ignored for axisymmetric problems
  int n_u = 16;
  int n_theta = 16;
  double tol = 1e-9;  // relative sup-change between sweeps
  int max_iterations = 60;
  Sweep sweep = Sweep::picard;
  Exec exec = Exec::parallel;
  bool allow_coincident = false;
  /// Grid ball radius is max(support radius of q, this).
  double min_grid_radius = 0.0;
};

class LsField {
 public:
  /// Solves for V on the grid; throws NonConvergence with the residual history.
  LsField(CoefficientProfile q, const Vec3& source, double T, const LsOptions& opt = {});

  /// First Born iterate at (x, t).
  double born(const Vec3& x, double t) const;
  /// Smooth part by the integral representation; 0 for t < |x - s|.
  double v(const Vec3& x, double t) const;
  /// v via grid interpolation when x lies in the grid ball, else v(x, t).
  double v_fast(const Vec3& x, double t) const;
  /// Interpolated V(y, sigma); y must lie in the grid ball.
  double retarded(const Vec3& y, double sigma) const;

  /// Samples t_k = k dt on [0, T]; dt defaults to the sigma step.
  ReceiverWaveform waveform(const Vec3& receiver, double dt = 0.0) const;

  int iterations() const { return iterations_; }
  const std::vector<double>& residual_history() const { return history_; }
  double t_max() const { return T_; }
  double d_sigma() const { return ds_; }
  const Vec3& source() const { return s_; }
  const CoefficientProfile& coefficient() const { return q_; }
  double grid_radius() const { return R_; }
  bool inside_grid(const Vec3& y) const { return y.norm() <= R_ * (1 + 1e-12); }
  /// max |V| over nodes and levels.
  double sup_abs() const;
  std::size_t node_count() const { return nodes_.size(); }
  bool is_zero() const { return zero_; }

 private:
  struct Sparse {
    std::vector<std::size_t> start;  // per level offset d, size M + 2
    std::vector<int> col;
    std::vector<double> val;
  };
  struct Frame;

  CoefficientProfile q_;
  Vec3 s_;
  double T_;
  LsOptions o_;
  double ds_ = 0.0, R_ = 0.0;
  int M_ = 0, n_psi_ = 1;
  bool zero_ = false;
  std::vector<Vec3> nodes_;
  std::vector<double> born_;  // [node][level]
  std::vector<double> V_;     // [node][level]
  std::vector<Sparse> ops_;
  GaussRule u_rule_;
  int iterations_ = 0;
  std::vector<double> history_;

  Frame frame(const Vec3& x) const;
  int stencil(const Vec3& y, int* idx, double* w) const;
  double interp_level(const Vec3& y, int level) const;
  /// (1/8 pi) int du int dtheta |y - s| q(y) V(y, sigma') on the p-slice.
  double shell(const Frame& f, double p, double sigma_prime) const;
  void build_operators();
  void solve();
};

ReceiverWaveform lippmann_schwinger_solve(const CoefficientProfile& q, const Vec3& source,
                                          const Vec3& receiver, double T,
                                          const LsOptions& opt = {});

}  // namespace cw::forward
