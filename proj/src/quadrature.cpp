#include "conewave/quadrature.hpp"

#include <algorithm>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <mutex>

#include "conewave/error.hpp"
#include "conewave/vec3.hpp"

namespace cw {

namespace {

GaussRule compute_rule(int n) {
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) { p1 = x; p0 = 1.0; }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
  return it->second;
}

GaussRule gauss_legendre(int n, double a, double b) {
  GaussRule r = gauss_legendre(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * r.nodes[i];
    r.weights[i] *= half;
  }
  return r;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

namespace {

// Gauss-Kronrod on [a, b]; on a failed error test the interval is bisected so
// that isolated kinks (profile support ends) get their own panels.
double adaptive_panel(const std::function<double(double)>& f, double a, double b,
                      double abs_tol, int depth, double& worst) {
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
  if (!std::isfinite(value)) throw NonConvergence("integrate_adaptive: non-finite value");
  if (err <= abs_tol || err <= 1e-9 * std::abs(value)) return value;
  if (depth == 0) {
    worst = std::max(worst, err);
    return value;
  }
  const double m = 0.5 * (a + b);
  return adaptive_panel(f, a, m, 0.5 * abs_tol, depth - 1, worst) +
         adaptive_panel(f, m, b, 0.5 * abs_tol, depth - 1, worst);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol) {
  if (a == b) return 0.0;
  double worst = 0.0;
  const double value = adaptive_panel(f, a, b, abs_tol, 30, worst);
  if (worst > 0.0)
    throw NonConvergence("integrate_adaptive: error estimate " + std::to_string(worst) +
                         " above tolerance on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  return value;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const std::vector<double>& breaks, double abs_tol) {
  std::vector<double> pts{a};
  for (double p : breaks)
    if (p > a && p < b) pts.push_back(p);
  std::sort(pts.begin() + 1, pts.end());
  pts.push_back(b);
  const double share = abs_tol / static_cast<double>(pts.size() - 1);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) acc += integrate_adaptive(f, pts[i], pts[i + 1], share);
  return acc;
}

}  // namespace cw
