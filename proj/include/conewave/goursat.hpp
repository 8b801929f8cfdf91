#pragma once

// Radial characteristic solver for phi = r v on {0 <= r <= t <= T}:
//
//   phi_tt - phi_rr + A(r) phi_t - Q(r) phi = f(r, t),
//   phi(r, r) given on the cone, phi(0, t) = 0 on the axis.
//
// Nodes sit at xi = t - r = i k, eta = t + r = j k with 0 <= i <= j and
// i + j <= M = 2T/k. Each cell closes with the midpoint rule
//
//   4 (N - E - W + S) + k A (N - S) - k^2 Q (N + E + W + S)/4 = k^2 f,
//
// coefficients taken at the cell centre. Columns (fixed eta) are filled in
// increasing j; node values never depend on M, so truncating T leaves the
// shared nodes bit-identical.

#include <functional>
#include <string>
#include <vector>

#include "conewave/profile.hpp"
#include "conewave/waveform.hpp"

namespace cw::forward {

enum class Kind { potential, damping };

std::string to_string(Kind k);
Kind kind_from_string(const std::string& s);

class GoursatField {
 public:
  using Coef = std::function<double(double r)>;
  using Source = std::function<double(double r, double t)>;

  GoursatField(double step, int max_sum);

  double step() const { return k_; }
  int max_sum() const { return m_; }
  double t_max() const { return 0.5 * m_ * k_; }
  /// Highest column already filled, -1 if none.
  int filled() const { return static_cast<int>(cols_.size()) - 1; }
  int column_size(int j) const;

  /// Node value; i > j reads the odd extension phi(-r, t) = -phi(r, t).
  double node(int i, int j) const;

  /// Fills column j = filled() + 1. Empty coefficient/source functions mean 0.
  void fill_next_column(double cone_phi, const Coef& damping, const Coef& potential = {},
                        const Source& source = {});

  /// Drops columns above j (j >= -1), e.g. to retry trial columns.
  void truncate(int j);

  /// v(0, m k) by one-sided extrapolation of phi / r along t = m k.
  double axis_v(int m) const;

  /// Piecewise-linear interpolant of phi on the (xi, eta) grid; 0 for t < r.
  double phi(double r, double t) const;
  /// v = phi / r with the axis value blended in for r < k.
  double v(double r, double t) const;
  /// d_t phi by second-order differences of the interpolant.
  double dphi_dt(double r, double t) const;

 private:
  double k_;
  int m_;
  std::vector<std::vector<double>> cols_;
};

struct RadialProblem {
  Kind kind = Kind::damping;
  CoefficientProfile coefficient = CoefficientProfile::zero();
  double T = 1.0;
  double h = 0.01;
  /// Optional forcing and cone data; used for manufactured solutions.
  GoursatField::Source source;
  std::function<double(double r)> cone_phi;
  /// Order-2 Richardson estimate of the axis error is checked against this
  /// when positive (costs one extra solve at h/2).
  double tolerance = 0.0;
};

struct RadialSolution {
  ReceiverWaveform at_origin;
  GoursatField field;
  double richardson_error = -1.0;
};

RadialSolution radial_goursat_solve(const RadialProblem& problem);

/// (box + A d_t) u = delta with radial A; v(0, t) on t = 0, h, ..., T.
RadialSolution radial_damping_solve(const CoefficientProfile& A, double T, double h,
                                    double tolerance = 0.0);

}  // namespace cw::forward
