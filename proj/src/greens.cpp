#include "conewave/greens.hpp"

#include <cmath>

#include "conewave/error.hpp"
#include "conewave/quadrature.hpp"

namespace cw::greens {

namespace {
constexpr double kLineTol = 1e-10;

void require_radial(const CoefficientProfile& q, const char* who) {
  if (q.symmetry() != Symmetry::radial)
    throw DomainError(std::string(who) + ": profile must be radial");
}
}  // namespace

double segment_mean(const CoefficientProfile& q, const Vec3& a, const Vec3& b) {
  if (q.is_zero()) return 0.0;
  const Vec3 d = b - a;
  if (d.norm() == 0.0) return q(a);
  if (q.symmetry() == Symmetry::radial && a.norm() == 0.0) {
    const double r = b.norm();
    return q.shape().primitive(r) / r;
  }
  return integrate_adaptive([&](double s) { return q(a + d * s); }, 0.0, 1.0, kLineTol);
}

double attenuation_R(const CoefficientProfile& q1, const Vec3& x, double t) {
  return std::exp(-0.5 * t * segment_mean(q1, Vec3{}, x));
}

RadialAttenuation::RadialAttenuation(const CoefficientProfile& radial_q1) : keep_(radial_q1) {
  require_radial(keep_, "RadialAttenuation");
  shape_ = &keep_.shape();
}

double RadialAttenuation::mean(double r) const {
  if (r <= 0.0) return shape_->value(0.0);
  return shape_->primitive(r) / r;
}

double RadialAttenuation::at(double r, double t) const { return std::exp(-0.5 * t * mean(r)); }

double RadialAttenuation::on_cone(double r) const {
  return std::exp(-0.5 * shape_->primitive(r));
}

double goursat_trace_potential(const CoefficientProfile& q, const Vec3& x) {
  return segment_mean(q, Vec3{}, x) / (8.0 * kPi);
}

double goursat_trace_translated(const CoefficientProfile& q, const Vec3& x) {
  return segment_mean(q, kFocus, x) / (8.0 * kPi);
}

namespace {
// Points s in (0, 1) where s r crosses a knot or the support end of the shape.
std::vector<double> radial_breaks(const Profile1D& shape, double r) {
  std::vector<double> out;
  for (double x : shape.xs()) out.push_back(x / r);
  out.push_back(shape.hi() / r);
  return out;
}
}  // namespace

double damping_pr_over_r(const CoefficientProfile& A, double r, double t) {
  require_radial(A, "damping_pr_over_r");
  const Profile1D& s = A.shape();
  if (r <= 0.0) {
    if (t != 0.0) throw DomainError("damping_pr_over_r: singular at r = 0 for t > 0");
    const double a0 = s.value(0.0);
    return 0.5 * s.derivative(0.0) - 0.25 * a0 * a0;
  }
  const double a = s.value(r), da = s.derivative(r);
  const double g = s.primitive(r) / r;
  // g' = (A - g)/r loses digits for small r; there use g' = int_0^1 s A'(s r) ds.
  double dg = (a - g) / r;
  if (r < 1e-3) {
    const GaussRule& rule = gauss_legendre(16, 0.0, 1.0);
    dg = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
      dg += rule.weights[k] * rule.nodes[k] * s.derivative(rule.nodes[k] * r);
  }
  return 0.25 * g * g + t * da / (2.0 * r) - 0.25 * t * t * dg * dg - 0.5 * a * g;
}

double goursat_trace_damping(const CoefficientProfile& A, double r) {
  require_radial(A, "goursat_trace_damping");
  if (r < 0.0) throw DomainError("goursat_trace_damping: negative radius");
  const double cone_R = std::exp(-0.5 * A.shape().primitive(r));
  if (r == 0.0) return -damping_pr_over_r(A, 0.0, 0.0) / (8.0 * kPi);
  const double integral = integrate_adaptive(
      [&](double s) { return s == 0.0 ? damping_pr_over_r(A, 0.0, 0.0)
                                       : damping_pr_over_r(A, s * r, s * r); },
      0.0, 1.0, radial_breaks(A.shape(), r), kLineTol);
  return -cone_R * integral / (8.0 * kPi);
}

double goursat_trace_damping(const CoefficientProfile& A, const Vec3& x) {
  return goursat_trace_damping(A, x.norm());
}

}  // namespace cw::greens
