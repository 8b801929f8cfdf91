#include "conewave/identity.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "conewave/error.hpp"
#include "conewave/fd_oracle.hpp"
#include "conewave/greens.hpp"
#include "conewave/quadrature.hpp"

namespace cw::identity {

void IdentityReport::finalize() {
  abs_residual.assign(lhs.size(), 0.0);
  max_abs_residual = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    abs_residual[i] = std::abs(lhs[i] - rhs[i]);
    max_abs_residual = std::max(max_abs_residual, abs_residual[i]);
    scale = std::max({scale, std::abs(lhs[i]), std::abs(rhs[i])});
  }
  rel_residual = scale > 0.0 ? max_abs_residual / scale : 0.0;
}

double compute_Q(const CoefficientProfile& q, double tau, const geometry::QuadratureOrder& order) {
  const auto slice = geometry::make_slice(tau, order.n_phi, order.n_theta);
  std::vector<double> terms(slice.nodes.size());
  for (std::size_t i = 0; i < slice.nodes.size(); ++i) {
    const auto& n = slice.nodes[i];
    terms[i] = n.weight * q(n.x) / geometry::ellipsoid_weight(tau, n.point);
  }
  return pairwise_sum(terms);
}

namespace {

struct PotentialFields {
  forward::LsField u1, u2, U;
};

forward::LsOptions widened(const PotentialOptions& opt, const CoefficientProfile& q1,
                           const CoefficientProfile& q2) {
  forward::LsOptions ls = opt.ls;
  ls.min_grid_radius = std::max({ls.min_grid_radius, q1.is_zero() ? 0.0 : q1.support_radius(),
                                 q2.is_zero() ? 0.0 : q2.support_radius()});
  return ls;
}

// T1..T4 at receiver time tau (> 1).
std::array<double, 4> potential_terms(const CoefficientProfile& q, const forward::LsField& v2,
                                      const forward::LsField& V, double tau,
                                      const PotentialOptions& opt) {
  if (tau <= 1.0 + 1e-9) return {0.0, 0.0, 0.0, 0.0};
  const double tg = 0.5 * tau;
  const auto exec = opt.ls.exec;
  const double t1 = compute_Q(q, tg, opt.order) / (16 * kPi * kPi);
  const double t2 = geometry::volume_integral(
      tg,
      [&](const Vec3& x) {
        const double qx = q(x);
        return qx == 0.0 ? 0.0 : qx * V.v_fast(x, tau - x.norm()) / (4 * kPi * x.norm());
      },
      opt.order, exec);
  const double t3 = geometry::volume_integral(
      tg,
      [&](const Vec3& x) {
        const double qx = q(x);
        const double de = (x - kFocus).norm();
        return qx == 0.0 ? 0.0 : qx * v2.v_fast(x, tau - de) / (4 * kPi * de);
      },
      opt.order, exec);
  const double t4 = geometry::volume_integral(
      tg,
      [&](const Vec3& x) {
        const double qx = q(x);
        if (qx == 0.0) return 0.0;
        const double lo = x.norm(), hi = tau - (x - kFocus).norm();
        if (hi <= lo) return 0.0;
        const auto g = gauss_legendre(opt.n_t, lo, hi);
        double acc = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
          acc += g.weights[i] * V.v_fast(x, tau - g.nodes[i]) * v2.v_fast(x, g.nodes[i]);
        return qx * acc;
      },
      opt.order, exec);
  return {t1, t2, t3, t4};
}

void check_grid(const std::vector<double>& g, const char* who) {
  if (g.empty()) throw DomainError(std::string(who) + ": empty grid");
  for (double v : g)
    if (!(v >= 0.0)) throw DomainError(std::string(who) + ": grid values must be non-negative");
}

void record_options(IdentityReport& r, const PotentialOptions& opt) {
  r.metadata["ls_d_sigma"] = std::to_string(opt.ls.d_sigma);
  r.metadata["ls_grid"] = std::to_string(opt.ls.n_r) + "x" + std::to_string(opt.ls.n_mu) + "x" +
                          std::to_string(opt.ls.n_psi);
  r.metadata["ls_angular"] = std::to_string(opt.ls.n_u) + "x" + std::to_string(opt.ls.n_theta);
  r.metadata["volume_order"] = std::to_string(opt.order.n_rho) + "x" +
                               std::to_string(opt.order.n_phi) + "x" +
                               std::to_string(opt.order.n_theta);
  r.metadata["time_nodes"] = std::to_string(opt.n_t);
  r.tolerances["ls_tol"] = opt.ls.tol;
}

}  // namespace

IdentityReport verify_lemma1(const CoefficientProfile& q1, const CoefficientProfile& q2,
                             const std::vector<double>& tau_grid, const PotentialOptions& opt) {
  check_grid(tau_grid, "verify_lemma1");
  const double T = *std::max_element(tau_grid.begin(), tau_grid.end());
  const auto ls = widened(opt, q1, q2);
  const forward::LsField u1(q1, Vec3{}, T, ls), u2(q2, Vec3{}, T, ls), U(q1, kFocus, T, ls);
  const auto q = CoefficientProfile::combine(1.0, q1, -1.0, q2);

  IdentityReport r;
  r.name = "lemma1";
  r.grid_name = "tau";
  r.grid = tau_grid;
  for (const char* k : {"T1", "T2", "T3", "T4"}) r.series[k] = {};
  for (double tau : tau_grid) {
    r.lhs.push_back(u1.v(kFocus, tau) - u2.v(kFocus, tau));
    const auto t = potential_terms(q, u2, U, tau, opt);
    r.series["T1"].push_back(t[0]);
    r.series["T2"].push_back(t[1]);
    r.series["T3"].push_back(t[2]);
    r.series["T4"].push_back(t[3]);
    r.rhs.push_back(t[0] + t[1] + t[2] + t[3]);
  }
  r.tolerances["rel"] = 0.05;
  record_options(r, opt);
  r.scalars["iterations_u1"] = u1.iterations();
  r.scalars["iterations_u2"] = u2.iterations();
  r.scalars["iterations_U"] = U.iterations();
  r.finalize();
  return r;
}

double lemma2_constant(const forward::LsField& v2, const forward::LsField& V, double T,
                       double spacing, double dt) {
  auto usable = [](const forward::LsField& f, const Vec3& x) { return f.is_zero() || f.inside_grid(x); };
  const double reach = 0.5 * (T + 1.0);
  const int n = static_cast<int>(std::ceil(reach / spacing));
  double s2 = 0.0, sV = 0.0;
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j)
      for (int k = -n; k <= n; ++k) {
        const Vec3 x{i * spacing, j * spacing, k * spacing};
        const double a = x.norm(), b = (x - kFocus).norm();
        if (a + b > T || !usable(v2, x) || !usable(V, x)) continue;
        for (int m = 0; m * dt <= T + 1e-12; ++m) {
          const double t = m * dt;
          if (t >= a && !v2.is_zero()) s2 = std::max(s2, std::abs(v2.v_fast(x, t)));
          if (t >= b && !V.is_zero()) sV = std::max(sV, std::abs(V.v_fast(x, t)));
        }
      }
  const double F = (reach * (sV + s2) + 4 * kPi * reach * reach * T * sV * s2) / (4 * kPi);
  return 16 * kPi * kPi * F;
}

IdentityReport verify_estimate_lemma2(const CoefficientProfile& q1, const CoefficientProfile& q2,
                                      const std::vector<double>& tau_grid,
                                      const PotentialOptions& opt) {
  check_grid(tau_grid, "verify_estimate_lemma2");
  for (double tau : tau_grid)
    if (tau <= 0.5) throw DomainError("verify_estimate_lemma2: tau must exceed 1/2");
  const double T = 2.0 * *std::max_element(tau_grid.begin(), tau_grid.end());
  const auto ls = widened(opt, q1, q2);
  const forward::LsField u1(q1, Vec3{}, T, ls), u2(q2, Vec3{}, T, ls), U(q1, kFocus, T, ls);
  const auto q = CoefficientProfile::combine(1.0, q1, -1.0, q2);
  const double K = lemma2_constant(u2, U, T);

  IdentityReport r;
  r.name = "lemma2";
  r.grid_name = "tau";
  r.grid = tau_grid;
  bool holds = true;
  for (double tau : tau_grid) {
    const double data = u1.v(kFocus, 2 * tau) - u2.v(kFocus, 2 * tau);
    const auto t = potential_terms(q, u2, U, 2 * tau, opt);
    r.lhs.push_back(t[0]);
    r.rhs.push_back(data - (t[1] + t[2] + t[3]));
    r.series["data"].push_back(data);
    r.series["volume_F_term"].push_back(t[1] + t[2] + t[3]);
    const double tg = tau;
    const double weighted = geometry::volume_integral(
        tg,
        [&](const Vec3& x) {
          const double qx = q(x);
          return qx == 0.0 ? 0.0 : std::abs(qx) / (x.norm() * (x - kFocus).norm());
        },
        opt.order, opt.ls.exec);
    const double bl = std::abs(16 * kPi * kPi * (t[0] - data));
    const double br = K * weighted;
    r.series["bound_lhs"].push_back(bl);
    r.series["bound_rhs"].push_back(br);
    holds = holds && bl <= br * (1 + 1e-12);
  }
  r.scalars["K"] = K;
  r.scalars["inequality_holds"] = holds ? 1.0 : 0.0;
  r.tolerances["rel"] = 0.05;
  r.metadata["K_sampling"] = "lattice 0.1 on grid balls within |x|+|x-e|<=T, dt 0.05";
  record_options(r, opt);
  r.finalize();
  return r;
}

namespace {

void sphere_rule(int n, std::vector<Vec3>& dirs, std::vector<double>& w) {
  const auto g = gauss_legendre(n);
  const int m = 2 * n;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double mu = g.nodes[i], st = std::sqrt(1 - mu * mu);
    for (int k = 0; k < m; ++k) {
      const double ph = 2 * kPi * k / m;
      dirs.push_back(Vec3{mu, st * std::cos(ph), st * std::sin(ph)});
      w.push_back(g.weights[i] * 2 * kPi / m);
    }
  }
}

}  // namespace

double delta_prime_surface(double r, const geometry::ScalarField& phi, double h_r, int n) {
  if (!(r > 0.0)) throw DomainError("delta_prime_surface: r must be positive");
  if (!(h_r > 0.0) || h_r >= r) throw DomainError("delta_prime_surface: need 0 < h_r < r");
  std::vector<Vec3> dirs;
  std::vector<double> w;
  sphere_rule(n, dirs, w);
  std::vector<double> terms(dirs.size());
  const double rp = r + h_r, rm = r - h_r;
  for (std::size_t i = 0; i < dirs.size(); ++i)
    terms[i] = w[i] * (rp * rp * phi(dirs[i] * rp) - rm * rm * phi(dirs[i] * rm)) / (2 * h_r);
  // (1/r^2) int_{|x|=r} ... dS = int ... d(omega)
  return -pairwise_sum(terms);
}

double delta_prime_surface_scaled(double r, const geometry::ScalarField& phi, double h_r, int n) {
  return 0.5 * delta_prime_surface(r, phi, h_r, n);
}

namespace {

double val(const CoefficientProfile& p, double r) { return p.shape().value(r); }
double der(const CoefficientProfile& p, double r) { return p.shape().derivative(r); }
double mean(const CoefficientProfile& p, double r) {
  return r <= 0.0 ? p.shape().value(0.0) : p.shape().primitive(r) / r;
}
double cone(const CoefficientProfile& p, double r) { return std::exp(-0.5 * p.shape().primitive(r)); }
double att(const CoefficientProfile& p, double r, double t) { return std::exp(-0.5 * t * mean(p, r)); }

void require_radial(const CoefficientProfile& p, const char* who) {
  if (p.symmetry() != Symmetry::radial) throw DomainError(std::string(who) + ": profiles must be radial");
}

double diff_val(const CoefficientProfile& A1, const CoefficientProfile& A2, double r) {
  return val(A2, r) - val(A1, r);
}

double mollifier_derivative(double t, double eps) {
  if (std::abs(t) >= eps) return 0.0;
  return -kPi * std::sin(kPi * t / eps) / (2 * eps * eps);
}

}  // namespace

double d_sigma_closed_form(const CoefficientProfile& A1, const CoefficientProfile& A2, double sigma) {
  require_radial(A1, "d_sigma_closed_form");
  require_radial(A2, "d_sigma_closed_form");
  const double a = diff_val(A1, A2, sigma), da = der(A2, sigma) - der(A1, sigma);
  return cone(A1, sigma) * cone(A2, sigma) *
         (da - 0.5 * a * (val(A1, sigma) + val(A2, sigma)) + a * mean(A2, sigma));
}

double d_sigma_finite_difference(const CoefficientProfile& A1, const CoefficientProfile& A2,
                                 double sigma, double h) {
  require_radial(A1, "d_sigma_finite_difference");
  require_radial(A2, "d_sigma_finite_difference");
  auto D = [&](double r) { return diff_val(A1, A2, r) * cone(A1, r) * att(A2, r, 2 * sigma - r); };
  auto central = [&](double k) { return (D(sigma + k) - D(sigma - k)) / (2 * k); };
  return (4 * central(0.5 * h) - central(h)) / 3;
}

double integrating_factor(const CoefficientProfile& A2, double sigma) {
  require_radial(A2, "integrating_factor");
  if (sigma <= 0.0) return 1.0;
  const double G = integrate_adaptive([&](double t) { return mean(A2, t); }, 0.0, sigma,
                                      {A2.shape().hi()}, 1e-12);
  return std::exp(2 * G);
}

DampingPair::DampingPair(const CoefficientProfile& a1, const CoefficientProfile& a2, double T, double h)
    : A1(a1),
      A2(a2),
      A(CoefficientProfile::combine(1.0, a2, -1.0, a1)),
      s1(forward::radial_damping_solve(a1, T, h)),
      s2(forward::radial_damping_solve(a2, T, h)) {
  require_radial(a1, "DampingPair");
  require_radial(a2, "DampingPair");
}

namespace {

struct Strip {
  double I3, I4, I5;
};

Strip strip_terms(const DampingPair& p, double sigma, int n) {
  const auto& f1 = p.s1.field;
  const auto& f2 = p.s2.field;
  const auto g = gauss_legendre(n, 0.0, sigma);
  double i3 = 0.0, i4 = 0.0, i5 = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double r = g.nodes[i], w = g.weights[i];
    const double a = diff_val(p.A1, p.A2, r);
    if (a == 0.0) continue;
    const double rho1 = cone(p.A1, r), rho2 = cone(p.A2, r);
    i3 += w * a * rho2 * f1.dphi_dt(r, 2 * sigma - r);
    i4 += w * a * rho1 * f2.dphi_dt(r, 2 * sigma - r);
    double inner = f2.phi(r, r) * f1.phi(r, 2 * sigma - r);
    if (2 * sigma - r > r) {
      const auto gt = gauss_legendre(n, r, 2 * sigma - r);
      for (std::size_t k = 0; k < gt.nodes.size(); ++k)
        inner += gt.weights[k] * f2.dphi_dt(r, gt.nodes[k]) * f1.phi(r, 2 * sigma - gt.nodes[k]);
    }
    i5 += w * 4 * kPi * a * inner;
  }
  const double a = diff_val(p.A1, p.A2, sigma);
  i3 += 0.5 * a * cone(p.A2, sigma) * f1.phi(sigma, sigma);
  i4 += 0.5 * a * cone(p.A1, sigma) * f2.phi(sigma, sigma);
  return {i3, i4, i5};
}

}  // namespace

ITermBreakdown iterm_breakdown(const DampingPair& p, double sigma, int n_quad) {
  if (!(sigma > 0.0) || 2 * sigma > p.s1.field.t_max() * (1 + 1e-12))
    throw DomainError("iterm_breakdown: need 0 < sigma <= T/2");
  ITermBreakdown b;
  b.sigma = sigma;
  const double a = diff_val(p.A1, p.A2, sigma);
  const double rho = cone(p.A1, sigma) * cone(p.A2, sigma);
  const double g2 = mean(p.A2, sigma);
  b.I1 = -a * rho * g2 / (16 * kPi);
  b.I2 = d_sigma_closed_form(p.A1, p.A2, sigma) / (16 * kPi);
  const Strip s = strip_terms(p, sigma, n_quad), coarse = strip_terms(p, sigma, n_quad / 2);
  b.I3 = s.I3;
  b.I4 = s.I4;
  b.I5 = s.I5;
  b.error_estimates["I3"] = std::abs(s.I3 - coarse.I3);
  b.error_estimates["I4"] = std::abs(s.I4 - coarse.I4);
  b.error_estimates["I5"] = std::abs(s.I5 - coarse.I5);
  b.data = p.s1.at_origin.at(2 * sigma) - p.s2.at_origin.at(2 * sigma);
  b.sum_residual = std::abs(b.I1 + b.I2 + b.I3 + b.I4 + b.I5 - b.data);

  // Mollified deltas in xi = t - r, eta = 2 sigma - t - r (dt dr = dxi deta / 2).
  const double eps = std::min(0.02, 0.1 * sigma);
  const auto g = gauss_legendre(32, -eps, eps);
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
      const double xi = g.nodes[i], eta = g.nodes[k];
      const double r = sigma - 0.5 * (xi + eta), t = sigma + 0.5 * (xi - eta);
      const double ar = diff_val(p.A1, p.A2, r);
      const double r2 = att(p.A2, r, t), r1 = att(p.A1, r, 2 * sigma - t);
      const double w = 0.5 * g.weights[i] * g.weights[k] * ar * r1 / (4 * kPi);
      m1 += w * (-0.5 * mean(p.A2, r) * r2) * forward::mollifier_1d(xi, eps) *
            forward::mollifier_1d(eta, eps);
      m2 += w * r2 * mollifier_derivative(xi, eps) * forward::mollifier_1d(eta, eps);
    }
  b.I1_mollified = m1;
  b.I2_mollified = m2;
  b.mollifier_width = eps;
  b.error_estimates["I1"] = std::abs(b.I1 - m1);
  b.error_estimates["I2"] = std::abs(b.I2 - m2);
  return b;
}

ITermBreakdown iterm_breakdown(const CoefficientProfile& A1, const CoefficientProfile& A2,
                               double sigma, double h) {
  const double T = h * std::ceil(2 * sigma / h - 1e-9);
  const DampingPair pair(A1, A2, std::max(T, 2 * h), h);
  return iterm_breakdown(pair, sigma);
}

IdentityReport atilde_ode_residual(const CoefficientProfile& A1, const CoefficientProfile& A2,
                                   const std::vector<double>& sigma_grid, double h) {
  check_grid(sigma_grid, "atilde_ode_residual");
  const double smax = *std::max_element(sigma_grid.begin(), sigma_grid.end());
  const double T = std::max(h * std::ceil(2 * smax / h - 1e-9), 2 * h);
  const DampingPair pair(A1, A2, T, h);

  IdentityReport r;
  r.name = "atilde_ode";
  r.grid_name = "sigma";
  r.grid = sigma_grid;
  for (double sigma : sigma_grid) {
    const double a = diff_val(A1, A2, sigma), da = der(A2, sigma) - der(A1, sigma);
    const double rho = cone(A1, sigma) * cone(A2, sigma);
    const double at = a * rho;
    const double dat = rho * (da - 0.5 * a * (val(A1, sigma) + val(A2, sigma)));
    double strip = 0.0, data = 0.0;
    if (sigma > 0.0) {
      const Strip s = strip_terms(pair, sigma, 48);
      strip = s.I3 + s.I4 + s.I5;
      data = pair.s1.at_origin.at(2 * sigma) - pair.s2.at_origin.at(2 * sigma);
    }
    r.lhs.push_back(dat / (16 * kPi));
    r.rhs.push_back(data - strip);
    const double ef = integrating_factor(A2, sigma);
    r.series["Atilde"].push_back(at);
    r.series["data"].push_back(data);
    r.series["literal_lhs"].push_back(ef * (dat + 2 * mean(A2, sigma) * at) / (8 * kPi));
    r.series["literal_rhs"].push_back(ef * (strip - data));
  }
  r.tolerances["rel"] = 0.05;
  r.metadata["h"] = std::to_string(h);
  r.metadata["form"] = "corrected: (A rho1 rho2)'/(16 pi) = (v1 - v2)(0, 2 sigma) - (I3 + I4 + I5)";
  r.finalize();
  return r;
}

}  // namespace cw::identity
