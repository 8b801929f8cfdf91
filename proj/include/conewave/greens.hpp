#pragma once

// Closed-form pieces of the progressing-wave expansion
//
//   u(x, t) = R(x, t) delta(t - |x|) / (4 pi |x|) + v(x, t),   v = 0 for t < |x|,
//
// for the two operators used here (box = d_t^2 - Laplacian):
//   potential  (box - q) u = delta
//   damping    (box + A d_t) u = delta,  R(x, t) = exp(-(t/2) int_0^1 A(s x) ds)
//
// The damping operator carries +A d_t: that is the sign for which the
// attenuation factor above decays, and for which the radial reduction reads
// phi_tt - phi_rr + A phi_t = 0 with phi = r v.

#include "conewave/profile.hpp"
#include "conewave/vec3.hpp"

namespace cw::greens {

/// int_0^1 q(a + s (b - a)) ds by adaptive quadrature (abs tol 1e-10).
double segment_mean(const CoefficientProfile& q, const Vec3& a, const Vec3& b);

/// R(x, t) = exp(-(t/2) int_0^1 q1(s x) ds).
double attenuation_R(const CoefficientProfile& q1, const Vec3& x, double t);

/// Radial restriction of the attenuation for q1 = A(|x|).
class RadialAttenuation {
 public:
  explicit RadialAttenuation(const CoefficientProfile& radial_q1);
  /// g(r) = int_0^1 A(s r) ds, with g(0) = A(0).
  double mean(double r) const;
  /// R(x, t) for |x| = r.
  double at(double r, double t) const;
  /// R(x, |x|) = exp(-1/2 int_0^r A).
  double on_cone(double r) const;

 private:
  const Profile1D* shape_;
  CoefficientProfile keep_;
};

/// v(x, |x|) = (1/8 pi) int_0^1 q(s x) ds for (box - q) u = delta.
double goursat_trace_potential(const CoefficientProfile& q, const Vec3& x);

/// V(x, |x - e|) = (1/8 pi) int_0^1 q(s x + (1 - s) e) ds for the source at e.
double goursat_trace_translated(const CoefficientProfile& q, const Vec3& x);

/// (P R)/R at |x| = r, time t, for P = box + A d_t and radial A.
///   g^2/4 + t A'(r)/(2r) - (t^2/4) g'(r)^2 - A(r) g(r)/2
/// (the d_r terms of the Laplacian combine into t A'/(2r)). Requires r > 0
/// unless t = 0 too, where the removable limit A'(0)/2 - A(0)^2/4 is returned.
double damping_pr_over_r(const CoefficientProfile& A, double r, double t);

/// v(x, |x|) = -(R(x,|x|)/8 pi) int_0^1 (P R)(s x, s|x|) / R(s x, s|x|) ds.
double goursat_trace_damping(const CoefficientProfile& A, const Vec3& x);
double goursat_trace_damping(const CoefficientProfile& A, double r);

}  // namespace cw::greens
