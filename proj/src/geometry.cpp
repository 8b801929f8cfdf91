#include "conewave/geometry.hpp"

#include <cmath>
#include <sstream>

#include "conewave/error.hpp"

namespace cw::geometry {

Vec3 prolate_to_cartesian(const ProlatePoint& p) {
  const double ch = std::cosh(p.rho), sh = std::sinh(p.rho);
  const double sp = std::sin(p.phi), cp = std::cos(p.phi);
  return {0.5 + 0.5 * ch * cp, 0.5 * sh * std::sin(p.theta) * sp,
          0.5 * sh * std::cos(p.theta) * sp};
}

ProlateLookup cartesian_to_prolate(const Vec3& x) {
  ProlateLookup out;
  const double d0 = x.norm();
  const double d1 = (x - kFocus).norm();
  const double ch = std::max(1.0, d0 + d1);
  const double rho = std::acosh(ch);
  const double sh = std::sinh(rho);
  const double transverse = std::hypot(x.y, x.z);

  double phi;
  if (sh > 0.0) {
    phi = std::atan2(2.0 * transverse / sh, (2.0 * x.x - 1.0) / ch);
  } else {
    // On the focal segment cos(phi) = |x| - |x - e|.
    phi = std::acos(std::clamp(d0 - d1, -1.0, 1.0));
  }

  double theta = 0.0;
  if (transverse == 0.0) {
    out.degenerate_theta = true;
    out.on_focal_segment = x.x > 0.0 && x.x < 1.0;
  } else {
    theta = std::atan2(x.y, x.z);
    if (theta < 0.0) theta += 2.0 * kPi;
  }
  out.point = {rho, theta, phi};
  return out;
}

double surface_density(const ProlatePoint& p) {
  const double ch = std::cosh(p.rho), cp = std::cos(p.phi);
  return 0.25 * std::sinh(p.rho) * std::sin(p.phi) * std::sqrt(ch * ch - cp * cp);
}

double volume_density(const ProlatePoint& p) {
  const double ch = std::cosh(p.rho), cp = std::cos(p.phi);
  return 0.125 * std::sinh(p.rho) * std::sin(p.phi) * (ch * ch - cp * cp);
}

double ellipsoid_weight(double tau, const ProlatePoint& p) {
  if (!(tau > 0.5)) throw DomainError("ellipsoid_weight: tau must exceed 1/2");
  const double cp = std::cos(p.phi);
  const double s = 4.0 * tau * tau;
  return 0.5 * std::sqrt((s - cp * cp) * (s - 1.0));
}

double spheroid_area(double tau) {
  const double a = tau;
  const double b = std::sqrt(tau * tau - 0.25);
  const double ecc = 0.5 / a;
  return 2.0 * kPi * b * b + 2.0 * kPi * a * b * std::asin(ecc) / ecc;
}

double spheroid_volume(double tau) { return 4.0 / 3.0 * kPi * tau * (tau * tau - 0.25); }

EllipsoidSlice make_slice(double tau, int n_phi, int n_theta) {
  if (!(tau > 0.5)) throw DomainError("make_slice: tau must exceed 1/2");
  if (n_phi < 1 || n_theta < 1) throw DomainError("make_slice: node counts must be positive");
  EllipsoidSlice s;
  s.tau = tau;
  s.n_phi = n_phi;
  s.n_theta = n_theta;
  const double ch = 2.0 * tau;
  const double rho = std::acosh(ch);
  const double sh = std::sqrt(ch * ch - 1.0);
  const GaussRule gu = gauss_legendre(n_phi);
  const double dtheta = 2.0 * kPi / n_theta;
  s.nodes.reserve(static_cast<std::size_t>(n_phi) * n_theta);
  for (int i = 0; i < n_phi; ++i) {
    const double u = gu.nodes[i];
    // sin(phi) d(phi) = du, so the density per du d(theta) drops the sin(phi).
    const double w = gu.weights[i] * dtheta * 0.25 * sh * std::sqrt(ch * ch - u * u);
    for (int j = 0; j < n_theta; ++j) {
      ProlatePoint p{rho, j * dtheta, std::acos(u)};
      s.nodes.push_back({p, prolate_to_cartesian(p), w});
    }
  }
  return s;
}

namespace {

void check_finite(double v, std::size_t node, const Vec3& x) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "non-finite integrand at node " << node << " (" << x.x << ", " << x.y << ", " << x.z
       << ")";
    throw DomainError(os.str());
  }
}

template <class Eval>
double reduce_nodes(std::size_t n, Eval&& eval, Exec exec) {
  std::vector<double> vals(n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) vals[i] = eval(i);
  } else {
    for (std::size_t i = 0; i < n; ++i) vals[i] = eval(i);
  }
  return pairwise_sum(vals);
}

}  // namespace

double surface_integral(double tau, const ScalarField& f, const QuadratureOrder& order,
                        Exec exec) {
  const EllipsoidSlice s = make_slice(tau, order.n_phi, order.n_theta);
  // Exceptions must not escape an OpenMP region; evaluate, then validate.
  std::vector<double> samples(s.nodes.size());
  auto eval = [&](std::size_t i) {
    samples[i] = f(s.nodes[i].x);
    return samples[i] * s.nodes[i].weight;
  };
  const double total = reduce_nodes(s.nodes.size(), eval, exec);
  for (std::size_t i = 0; i < samples.size(); ++i) check_finite(samples[i], i, s.nodes[i].x);
  return total;
}

double volume_integral(double tau, const ScalarField& f, const QuadratureOrder& order,
                       Exec exec) {
  if (!(tau >= 0.5)) throw DomainError("volume_integral: tau must be at least 1/2");
  if (tau == 0.5) return 0.0;
  const GaussRule gc = gauss_legendre(order.n_rho, 1.0, 2.0 * tau);
  const GaussRule gu = gauss_legendre(order.n_phi);
  const int nt = order.n_theta;
  const double dtheta = 2.0 * kPi / nt;
  const std::size_t n = static_cast<std::size_t>(order.n_rho) * order.n_phi * nt;
  std::vector<double> samples(n);
  std::vector<Vec3> points(n);
  auto eval = [&](std::size_t idx) {
    const int k = static_cast<int>(idx % nt);
    const int j = static_cast<int>((idx / nt) % order.n_phi);
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(nt) * order.n_phi));
    const double c = gc.nodes[i], u = gu.nodes[j];
    const ProlatePoint p{std::acosh(c), k * dtheta, std::acos(u)};
    points[idx] = prolate_to_cartesian(p);
    samples[idx] = f(points[idx]);
    // dx = 1/8 (c^2 - u^2) dc du d(theta)
    return samples[idx] * gc.weights[i] * gu.weights[j] * dtheta * 0.125 * (c * c - u * u);
  };
  const double total = reduce_nodes(n, eval, exec);
  for (std::size_t i = 0; i < n; ++i) check_finite(samples[i], i, points[i]);
  return total;
}

}  // namespace cw::geometry
