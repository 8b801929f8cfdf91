#include "conewave/fd_oracle.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "conewave/error.hpp"
#include "conewave/greens.hpp"

namespace cw::forward {

double mollifier_1d(double t, double eps) {
  if (std::abs(t) >= eps) return 0.0;
  return (1.0 + std::cos(kPi * t / eps)) / (2.0 * eps);
}

double mollifier_3d(double r, double eps) {
  if (r >= eps) return 0.0;
  const double c = std::cos(0.5 * kPi * r / eps);
  return c * c / (4.0 * kPi * eps * eps * eps * (1.0 / 6.0 - 1.0 / (kPi * kPi)));
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Trace {
  std::vector<double> t, u, u0;
};

// psi = r u on r_i = i h, psi_0 = psi_N = 0.
Trace run_radial(const CoefficientProfile& q, Kind kind, double r_rec, double T,
                 const FdOptions& o) {
  const double h = o.h, eps = o.eps, dt = o.cfl * h;
  const int n_r = static_cast<int>(std::ceil((T + r_rec + 2 * eps) / h)) + 4;
  std::vector<double> a(n_r + 1, 0.0), pot(n_r + 1, 0.0), src(n_r + 1, 0.0);
  for (int i = 0; i <= n_r; ++i) {
    const double r = i * h;
    const double c = q.is_zero() ? 0.0 : q(Vec3{r, 0, 0});
    (kind == Kind::damping ? a : pot)[i] = c;
    src[i] = r * mollifier_3d(r, eps);
  }
  std::vector<double> prev(n_r + 1, 0.0), cur(n_r + 1, 0.0), next(n_r + 1, 0.0);
  std::vector<double> prev0 = prev, cur0 = cur, next0 = next;
  const int n0 = static_cast<int>(std::ceil(eps / dt)) + 1;
  const int n_end = n0 + static_cast<int>(std::floor(T / dt + 1e-9));

  auto sample = [&](const std::vector<double>& psi) {
    if (r_rec == 0.0) return (4.0 * psi[1] / h - psi[2] / (2.0 * h)) / 3.0;
    const double pos = r_rec / h;
    const int i = static_cast<int>(pos);
    const double f = pos - i;
    return ((1 - f) * psi[i] + f * psi[i + 1]) / r_rec;
  };

  Trace out;
  for (int n = 1; n <= n_end; ++n) {
    const double t = (n - n0) * dt;  // time level of cur
    if (t >= -1e-12) {
      out.t.push_back(t);
      out.u.push_back(sample(cur));
      out.u0.push_back(sample(cur0));
    }
    if (n == n_end) break;
    const double st = mollifier_1d(t, eps);
    for (int i = 1; i < n_r; ++i) {
      const double lap = (cur[i + 1] - 2 * cur[i] + cur[i - 1]) / (h * h);
      const double ad = 0.5 * a[i] * dt;
      next[i] = (2 * cur[i] - (1 - ad) * prev[i] + dt * dt * (lap + pot[i] * cur[i] + src[i] * st)) /
                (1 + ad);
      const double lap0 = (cur0[i + 1] - 2 * cur0[i] + cur0[i - 1]) / (h * h);
      next0[i] = 2 * cur0[i] - prev0[i] + dt * dt * (lap0 + src[i] * st);
    }
    std::swap(prev, cur);
    std::swap(cur, next);
    std::swap(prev0, cur0);
    std::swap(cur0, next0);
  }
  return out;
}

// Cartesian grid x = source + h (i, j, k), |i|, |j|, |k| <= n, Dirichlet walls
// far enough out that reflections reach the receiver only after T.
Trace run_cartesian(const CoefficientProfile& q, Kind kind, const Vec3& source,
                    const Vec3& receiver, double T, const FdOptions& o) {
  const double h = o.h, eps = o.eps, dt = o.cfl * h / std::sqrt(3.0);
  const Vec3 d = receiver - source;
  const double half = 0.5 * (T + d.norm() + eps) + 4 * h;
  const int n = static_cast<int>(std::ceil(half / h));
  const int m = 2 * n + 1;
  const std::size_t total = static_cast<std::size_t>(m) * m * m;
  auto idx = [m](int i, int j, int k) {
    return (static_cast<std::size_t>(i) * m + static_cast<std::size_t>(j)) * m + static_cast<std::size_t>(k);
  };

  std::vector<double> a(total, 0.0), pot(total, 0.0), src(total, 0.0);
  double mass = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        const Vec3 off{(i - n) * h, (j - n) * h, (k - n) * h};
        const double c = q.is_zero() ? 0.0 : q(source + off);
        (kind == Kind::damping ? a : pot)[idx(i, j, k)] = c;
        src[idx(i, j, k)] = mollifier_3d(off.norm(), eps);
        mass += src[idx(i, j, k)];
      }
  for (double& s : src) s /= mass * h * h * h;

  std::vector<double> prev(total, 0.0), cur(total, 0.0), next(total, 0.0);
  std::vector<double> prev0 = prev, cur0 = cur, next0 = next;
  const int n0 = static_cast<int>(std::ceil(eps / dt)) + 1;
  const int n_end = n0 + static_cast<int>(std::floor(T / dt + 1e-9));
  const double ih2 = 1.0 / (h * h);

  const double px = d.x / h + n, py = d.y / h + n, pz = d.z / h + n;
  const int ix = static_cast<int>(px), iy = static_cast<int>(py), iz = static_cast<int>(pz);
  const double fx = px - ix, fy = py - iy, fz = pz - iz;
  auto sample = [&](const std::vector<double>& u) {
    double acc = 0.0;
    for (int a1 = 0; a1 < 2; ++a1)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int c1 = 0; c1 < 2; ++c1)
          acc += (a1 ? fx : 1 - fx) * (b1 ? fy : 1 - fy) * (c1 ? fz : 1 - fz) *
                 u[idx(ix + a1, iy + b1, iz + c1)];
    return acc;
  };

  Trace out;
  for (int step = 1; step <= n_end; ++step) {
    const double t = (step - n0) * dt;
    if (t >= -1e-12) {
      out.t.push_back(t);
      out.u.push_back(sample(cur));
      out.u0.push_back(sample(cur0));
    }
    if (step == n_end) break;
    const double st = mollifier_1d(t, eps);
    const bool par = o.exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (par)
    for (int i = 1; i < m - 1; ++i)
      for (int j = 1; j < m - 1; ++j)
        for (int k = 1; k < m - 1; ++k) {
          const std::size_t c = idx(i, j, k);
          const std::size_t sj = static_cast<std::size_t>(m), si = sj * sj;
          const double lap =
              (cur[c + si] + cur[c - si] + cur[c + sj] + cur[c - sj] + cur[c + 1] + cur[c - 1] - 6 * cur[c]) * ih2;
          const double ad = 0.5 * a[c] * dt;
          next[c] = (2 * cur[c] - (1 - ad) * prev[c] + dt * dt * (lap + pot[c] * cur[c] + src[c] * st)) /
                    (1 + ad);
          const double lap0 = (cur0[c + si] + cur0[c - si] + cur0[c + sj] + cur0[c - sj] + cur0[c + 1] +
                               cur0[c - 1] - 6 * cur0[c]) * ih2;
          next0[c] = 2 * cur0[c] - prev0[c] + dt * dt * (lap0 + src[c] * st);
        }
    std::swap(prev, cur);
    std::swap(cur, next);
    std::swap(prev0, cur0);
    std::swap(cur0, next0);
  }
  return out;
}

}  // namespace

ReceiverWaveform fd_oracle_solve(const CoefficientProfile& q, Kind kind, const Vec3& source,
                                 const Vec3& receiver, double T, const FdOptions& opt) {
  if (!(opt.cfl > 0.0) || opt.cfl > 0.9)
    throw DomainError("fd_oracle_solve: CFL number " + fmt(opt.cfl) + " outside (0, 0.9]");
  if (!(opt.h > 0.0) || opt.eps < 4.0 * opt.h)
    throw DomainError("fd_oracle_solve: mollifier width must span at least 4 cells");
  if (!(T > 0.0)) throw DomainError("fd_oracle_solve: need T > 0");

  const bool radial =
      source.norm() == 0.0 && (q.is_zero() || q.symmetry() == Symmetry::radial);
  const Trace tr = radial ? run_radial(q, kind, receiver.norm(), T, opt)
                          : run_cartesian(q, kind, source, receiver, T, opt);

  const double dist = (receiver - source).norm();
  const double mean =
      kind == Kind::damping && !q.is_zero() ? greens::segment_mean(q, source, receiver) : 0.0;

  ReceiverWaveform w;
  w.source = source;
  w.receiver = receiver;
  w.t0 = tr.t.front();
  w.dt = tr.t.size() > 1 ? tr.t[1] - tr.t[0] : 0.0;
  w.values.resize(tr.t.size());
  for (std::size_t k = 0; k < tr.t.size(); ++k)
    w.values[k] = opt.total_field ? tr.u[k] : tr.u[k] - std::exp(-0.5 * tr.t[k] * mean) * tr.u0[k];
  w.singular = SingularPart{dist, std::exp(-0.5 * dist * mean)};
  w.solver = "fd_oracle";
  w.params["grid"] = radial ? "radial1d" : "cartesian3d";
  w.params["kind"] = to_string(kind);
  w.params["h"] = fmt(opt.h);
  w.params["eps"] = fmt(opt.eps);
  w.params["cfl"] = fmt(opt.cfl);
  w.params["T"] = fmt(T);
  if (opt.total_field) w.params["field"] = "total";
  return w;
}

}  // namespace cw::forward
