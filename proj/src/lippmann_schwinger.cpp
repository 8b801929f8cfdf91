#include "conewave/lippmann_schwinger.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "conewave/error.hpp"

namespace cw::forward {

std::string to_string(Sweep s) { return s == Sweep::picard ? "picard" : "gauss_seidel"; }

Sweep sweep_from_string(const std::string& s) {
  if (s == "picard") return Sweep::picard;
  if (s == "gauss_seidel") return Sweep::gauss_seidel;
  throw ConfigError("unknown sweep '" + s + "' (expected picard or gauss_seidel)");
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

Vec3 normalized(const Vec3& v) { return v * (1.0 / v.norm()); }

}  // namespace

struct LsField::Frame {
  Vec3 s, n, m1, m2;
  double a = 0.0;

  Frame(const Vec3& source, const Vec3& x) : s(source) {
    const Vec3 d = x - source;
    a = d.norm();
    n = a > 1e-14 ? d * (1.0 / a) : Vec3{1, 0, 0};
    const Vec3 helper = std::abs(n.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    m1 = normalized(n.cross(helper));
    m2 = n.cross(m1);
  }

  Vec3 point(double p, double u, double c, double sn) const {
    const double beta = std::sqrt(std::max(0.0, p * p - 0.25 * a * a)) * std::sqrt(std::max(0.0, 1 - u * u));
    return s + n * (0.5 * a + p * u) + (m1 * c + m2 * sn) * beta;
  }
};

LsField::Frame LsField::frame(const Vec3& x) const { return Frame(s_, x); }

LsField::LsField(CoefficientProfile q, const Vec3& source, double T, const LsOptions& opt)
    : q_(std::move(q)), s_(source), T_(T), o_(opt) {
  if (!(T > 0.0)) throw DomainError("lippmann_schwinger: need T > 0");
  if (!(opt.d_sigma > 0.0) || opt.n_r < 2 || opt.n_mu < 2 || opt.n_psi < 1 || opt.n_u < 2 ||
      opt.n_theta < 1 || opt.max_iterations < 1)
    throw DomainError("lippmann_schwinger: invalid grid options");
  M_ = static_cast<int>(std::ceil(T / opt.d_sigma - 1e-9));
  ds_ = T / M_;
  R_ = q_.is_zero() ? 0.0 : q_.support_radius();
  zero_ = q_.is_zero() || !(R_ > 0.0);
  R_ = std::max(R_, opt.min_grid_radius);
  if (zero_) return;

  const bool axis = q_.axisymmetric() && s_.y == 0.0 && s_.z == 0.0;
  n_psi_ = axis ? 1 : opt.n_psi;
  u_rule_ = gauss_legendre(opt.n_u);
  const double dr = R_ / (opt.n_r - 1), dmu = 2.0 / (opt.n_mu - 1);
  for (int i = 0; i < opt.n_r; ++i)
    for (int l = 0; l < opt.n_mu; ++l)
      for (int k = 0; k < n_psi_; ++k) {
        const double r = i * dr, mu = -1.0 + l * dmu, psi = 2 * kPi * k / n_psi_;
        const double st = std::sqrt(std::max(0.0, 1 - mu * mu));
        nodes_.push_back(Vec3{r * mu, r * st * std::cos(psi), r * st * std::sin(psi)});
      }

  const std::size_t L = static_cast<std::size_t>(M_) + 1;
  born_.assign(nodes_.size() * L, 0.0);
  const bool par = opt.exec == Exec::parallel;
  const int n_nodes = static_cast<int>(nodes_.size());
#pragma omp parallel for schedule(dynamic, 4) if (par)
  for (int j = 0; j < n_nodes; ++j) {
    const double a = (nodes_[j] - s_).norm();
    for (int m = 0; m <= M_; ++m) born_[j * L + m] = born(nodes_[j], a + m * ds_);
  }
  build_operators();
  solve();
}

int LsField::stencil(const Vec3& y, int* idx, double* w) const {
  const double r = y.norm();
  if (r > R_ * (1 + 1e-12)) return 0;
  const double dr = R_ / (o_.n_r - 1), dmu = 2.0 / (o_.n_mu - 1);
  const double fr = std::min(r / dr, o_.n_r - 1.0);
  const int i0 = std::min(static_cast<int>(fr), o_.n_r - 2);
  const double wr = fr - i0;
  const double mu = r > 0.0 ? std::clamp(y.x / r, -1.0, 1.0) : 0.0;
  const double fm = (mu + 1.0) / dmu;
  const int l0 = std::min(static_cast<int>(fm), o_.n_mu - 2);
  const double wm = fm - l0;
  int k0 = 0, k1 = 0;
  double wp = 0.0;
  if (n_psi_ > 1) {
    double psi = std::atan2(y.z, y.y);
    if (psi < 0) psi += 2 * kPi;
    const double fp = psi / (2 * kPi / n_psi_);
    k0 = static_cast<int>(fp) % n_psi_;
    k1 = (k0 + 1) % n_psi_;
    wp = fp - std::floor(fp);
  }
  int c = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double wab = (a ? wr : 1 - wr) * (b ? wm : 1 - wm);
      const int base = ((i0 + a) * o_.n_mu + (l0 + b)) * n_psi_;
      if (n_psi_ == 1) {
        idx[c] = base;
        w[c++] = wab;
      } else {
        idx[c] = base + k0;
        w[c++] = wab * (1 - wp);
        idx[c] = base + k1;
        w[c++] = wab * wp;
      }
    }
  return c;
}

double LsField::interp_level(const Vec3& y, int level) const {
  int idx[8];
  double w[8];
  const int n = stencil(y, idx, w);
  const std::size_t L = static_cast<std::size_t>(M_) + 1;
  double acc = 0.0;
  for (int c = 0; c < n; ++c) acc += w[c] * V_[idx[c] * L + level];
  return acc;
}

double LsField::retarded(const Vec3& y, double sigma) const {
  if (zero_ || sigma < 0.0) return 0.0;
  if (!inside_grid(y)) throw DomainError("LsField::retarded: point outside the grid ball");
  if (sigma > T_ * (1 + 1e-12)) throw DomainError("LsField::retarded: sigma beyond T");
  const double f = std::min(sigma / ds_, static_cast<double>(M_));
  const int m0 = std::min(static_cast<int>(f), M_ - 1);
  const double w = f - m0;
  return (1 - w) * interp_level(y, m0) + w * interp_level(y, m0 + 1);
}

double LsField::born(const Vec3& x, double t) const {
  if (zero_) return 0.0;
  const Frame f = frame(x);
  if (t < f.a - 1e-12) return 0.0;
  const double p = std::max(0.5 * t, 0.5 * f.a);
  const double wt = 2 * kPi / o_.n_theta;
  double acc = 0.0;
  for (std::size_t iu = 0; iu < u_rule_.nodes.size(); ++iu) {
    double ring = 0.0;
    for (int b = 0; b < o_.n_theta; ++b) {
      const double th = wt * b;
      ring += q_(f.point(p, u_rule_.nodes[iu], std::cos(th), std::sin(th)));
    }
    acc += u_rule_.weights[iu] * ring;
  }
  return acc * wt / (32 * kPi * kPi);
}

double LsField::shell(const Frame& f, double p, double sigma_prime) const {
  const double wt = 2 * kPi / o_.n_theta;
  double acc = 0.0;
  for (std::size_t iu = 0; iu < u_rule_.nodes.size(); ++iu) {
    const double u = u_rule_.nodes[iu];
    double ring = 0.0;
    for (int b = 0; b < o_.n_theta; ++b) {
      const double th = wt * b;
      const Vec3 y = f.point(p, u, std::cos(th), std::sin(th));
      const double qy = q_(y);
      if (qy == 0.0) continue;
      ring += qy * retarded(y, sigma_prime);
    }
    acc += u_rule_.weights[iu] * (p + 0.5 * f.a * u) * ring;
  }
  return acc * wt / (8 * kPi);
}

void LsField::build_operators() {
  const int n_nodes = static_cast<int>(nodes_.size());
  ops_.assign(nodes_.size(), Sparse{});
  const bool par = o_.exec == Exec::parallel;
  const double wt = 2 * kPi / o_.n_theta;
#pragma omp parallel for schedule(dynamic, 4) if (par)
  for (int j = 0; j < n_nodes; ++j) {
    const Frame f = frame(nodes_[j]);
    Sparse& sp = ops_[j];
    std::vector<double> scratch(nodes_.size(), 0.0);
    std::vector<int> touched;
    sp.start.push_back(0);
    for (int d = 0; d <= M_; ++d) {
      const double p = 0.5 * f.a + 0.5 * d * ds_;
      for (std::size_t iu = 0; iu < u_rule_.nodes.size(); ++iu) {
        const double u = u_rule_.nodes[iu];
        for (int b = 0; b < o_.n_theta; ++b) {
          const double th = wt * b;
          const Vec3 y = f.point(p, u, std::cos(th), std::sin(th));
          const double qy = q_(y);
          if (qy == 0.0) continue;
          int idx[8];
          double w[8];
          const int n = stencil(y, idx, w);
          const double base = ds_ / (8 * kPi) * u_rule_.weights[iu] * wt * (p + 0.5 * f.a * u) * qy;
          for (int c = 0; c < n; ++c) {
            if (scratch[idx[c]] == 0.0) touched.push_back(idx[c]);
            scratch[idx[c]] += base * w[c];
          }
        }
      }
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (int k : touched) {
        if (scratch[k] != 0.0) {
          sp.col.push_back(k);
          sp.val.push_back(scratch[k]);
        }
        scratch[k] = 0.0;
      }
      touched.clear();
      sp.start.push_back(sp.col.size());
    }
  }
}

void LsField::solve() {
  const std::size_t L = static_cast<std::size_t>(M_) + 1;
  const int n_nodes = static_cast<int>(nodes_.size());
  V_.assign(nodes_.size() * L, 0.0);
  std::vector<double> next(V_.size());
  const bool par = o_.exec == Exec::parallel;

  // sum_d tau(d, m) S[j][d] . V[:, m - d] with trapezoid end weights.
  auto volterra = [&](int j, int m, const std::vector<double>& V) {
    if (m == 0) return 0.0;
    const Sparse& sp = ops_[j];
    double acc = 0.0;
    for (int d = 0; d <= m; ++d) {
      double part = 0.0;
      for (std::size_t e = sp.start[d]; e < sp.start[d + 1]; ++e)
        part += sp.val[e] * V[sp.col[e] * L + (m - d)];
      acc += (d == 0 || d == m ? 0.5 : 1.0) * part;
    }
    return acc;
  };

  for (int it = 1; it <= o_.max_iterations; ++it) {
    if (o_.sweep == Sweep::picard) {
#pragma omp parallel for schedule(dynamic, 4) if (par)
      for (int j = 0; j < n_nodes; ++j)
        for (int m = 0; m <= M_; ++m) next[j * L + m] = born_[j * L + m] + volterra(j, m, V_);
    } else {
      next = V_;
      std::vector<double> level(nodes_.size());
      for (int m = 0; m <= M_; ++m) {
#pragma omp parallel for schedule(dynamic, 4) if (par)
        for (int j = 0; j < n_nodes; ++j) level[j] = born_[j * L + m] + volterra(j, m, next);
        for (int j = 0; j < n_nodes; ++j) next[j * L + m] = level[j];
      }
    }
    double diff = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < V_.size(); ++k) {
      diff = std::max(diff, std::abs(next[k] - V_[k]));
      scale = std::max(scale, std::abs(next[k]));
    }
    V_.swap(next);
    iterations_ = it;
    const double rel = scale > 0.0 ? diff / scale : 0.0;
    history_.push_back(rel);
    if (!std::isfinite(rel) || !std::isfinite(scale))
      throw NonConvergence("lippmann_schwinger: iteration produced non-finite values", history_);
    if (rel <= o_.tol) return;
  }
  throw NonConvergence("lippmann_schwinger: no convergence after " + std::to_string(o_.max_iterations) +
                           " sweeps (last relative change " + fmt(history_.back()) +
                           "); T |q| is too large for the Neumann series at this resolution",
                       history_);
}

double LsField::v(const Vec3& x, double t) const {
  if (zero_) return 0.0;
  if (t > T_ * (1 + 1e-12)) throw DomainError("LsField::v: t beyond T");
  const Frame f = frame(x);
  double sigma = t - f.a;
  if (sigma < -1e-12) return 0.0;
  sigma = std::max(sigma, 0.0);
  std::vector<double> pts;
  for (int m = 0; m * ds_ <= sigma * (1 + 1e-12); ++m) pts.push_back(m * ds_);
  if (sigma - pts.back() > 1e-12 * (1 + sigma)) pts.push_back(sigma);
  double acc = 0.0;
  double prev = shell(f, 0.5 * f.a + 0.5 * sigma, 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double cur = shell(f, 0.5 * f.a + 0.5 * (sigma - pts[i]), pts[i]);
    acc += 0.5 * (pts[i] - pts[i - 1]) * (prev + cur);
    prev = cur;
  }
  return born(x, t) + acc;
}

double LsField::v_fast(const Vec3& x, double t) const {
  if (zero_) return 0.0;
  if (!inside_grid(x)) return v(x, t);
  return retarded(x, t - (x - s_).norm());
}

double LsField::sup_abs() const {
  double m = 0.0;
  for (double v : V_) m = std::max(m, std::abs(v));
  return m;
}

ReceiverWaveform LsField::waveform(const Vec3& receiver, double dt) const {
  const double dist = (receiver - s_).norm();
  if (dist < 1e-12 && !o_.allow_coincident)
    throw DomainError("lippmann_schwinger: receiver coincides with the source (set allow_coincident)");
  if (dt <= 0.0) dt = ds_;
  const int n = static_cast<int>(std::floor(T_ / dt + 1e-9));
  ReceiverWaveform w;
  w.source = s_;
  w.receiver = receiver;
  w.t0 = 0.0;
  w.dt = dt;
  w.values.resize(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) w.values[k] = v(receiver, k * dt);
  w.singular = SingularPart{dist, 1.0};
  w.solver = "lippmann_schwinger";
  w.params["sweep"] = to_string(o_.sweep);
  w.params["iterations"] = std::to_string(iterations_);
  w.params["final_residual"] = history_.empty() ? "0" : fmt(history_.back());
  w.params["d_sigma"] = fmt(ds_);
  w.params["grid"] = std::to_string(o_.n_r) + "x" + std::to_string(o_.n_mu) + "x" + std::to_string(n_psi_);
  w.params["angular"] = std::to_string(o_.n_u) + "x" + std::to_string(o_.n_theta);
  w.params["T"] = fmt(T_);
  return w;
}

ReceiverWaveform lippmann_schwinger_solve(const CoefficientProfile& q, const Vec3& source,
                                          const Vec3& receiver, double T, const LsOptions& opt) {
  if ((receiver - source).norm() < 1e-12 && !opt.allow_coincident)
    throw DomainError("lippmann_schwinger: receiver coincides with the source (set allow_coincident)");
  const LsField field(q, source, T, opt);
  return field.waveform(receiver);
}

}  // namespace cw::forward
