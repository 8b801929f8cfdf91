#include "conewave/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "conewave/error.hpp"
#include "conewave/goursat.hpp"
#include "conewave/identity.hpp"

namespace cw::inversion {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

void check_config(const InversionConfig& cfg) {
  if (!(cfg.delta > 0.0)) throw DomainError("inversion: layer step must be positive");
  if (!(cfg.tolerance > 0.0)) throw DomainError("inversion: tolerance must be positive");
  if (cfg.max_iterations < 1) throw DomainError("inversion: need at least one iteration");
  if (!(cfg.relaxation > 0.0 && cfg.relaxation <= 1.0))
    throw DomainError("inversion: relaxation must lie in (0, 1]");
}

// Data before the first arrival must vanish up to the tolerance.
void check_causal(const ReceiverWaveform& d, double first_arrival, double tol) {
  for (std::size_t k = 0; k < d.values.size(); ++k)
    if (d.time(k) < first_arrival - 1e-9 && std::abs(d.values[k]) > tol)
      throw DomainError("inversion: data nonzero at t = " + fmt(d.time(k)) +
                        " before the first possible arrival " + fmt(first_arrival));
}

CoefficientProfile ellipsoidal_table(std::vector<double> xs, std::vector<double> ys, double delta) {
  if (std::all_of(ys.begin(), ys.end(), [](double y) { return y == 0.0; }))
    return CoefficientProfile::zero();
  // Constant below 1 (no point has a smaller focal sum), zero one step past
  // the last layer.
  xs.insert(xs.begin(), xs.front() - delta);
  ys.insert(ys.begin(), ys.front());
  xs.push_back(xs.back() + delta);
  ys.push_back(0.0);
  return CoefficientProfile::ellipsoidal(Profile1D::sampled(std::move(xs), std::move(ys)));
}

struct Linear {
  const std::vector<double>& r;
  const std::vector<double>& a;
  // Linear interpolation, extrapolating the end segments.
  double operator()(double x) const {
    if (r.size() == 1) return a[0];
    auto it = std::upper_bound(r.begin() + 1, r.end() - 1, x);
    const auto i = static_cast<std::size_t>(it - r.begin()) - 1;
    return a[i] + (a[i + 1] - a[i]) * (x - r[i]) / (r[i + 1] - r[i]);
  }
};

}  // namespace

CoefficientProfile piecewise_linear_radial(const std::vector<double>& r, const std::vector<double>& A) {
  if (r.size() != A.size() || r.size() < 2 || r.front() != 0.0)
    throw DomainError("piecewise_linear_radial: need matching nodes starting at 0");
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i] > r[i - 1])) throw DomainError("piecewise_linear_radial: nodes must increase");
  if (std::all_of(A.begin(), A.end(), [](double v) { return v == 0.0; }))
    return CoefficientProfile::zero();
  auto rr = std::make_shared<std::vector<double>>(r);
  auto aa = std::make_shared<std::vector<double>>(A);
  auto f = [rr, aa](double s) { return Linear{*rr, *aa}(std::clamp(s, 0.0, rr->back())); };
  auto df = [rr, aa](double s) {
    const auto& x = *rr;
    auto it = std::upper_bound(x.begin() + 1, x.end() - 1, std::clamp(s, 0.0, x.back()));
    const auto i = static_cast<std::size_t>(it - x.begin()) - 1;
    return ((*aa)[i + 1] - (*aa)[i]) / (x[i + 1] - x[i]);
  };
  return CoefficientProfile::radial(Profile1D::analytic(f, df, 0.0, r.back()));
}

double cone_phi_piecewise_linear(const std::vector<double>& r, const std::vector<double>& A,
                                 double at) {
  if (r.empty() || r.size() != A.size() || r.front() != 0.0)
    throw DomainError("cone_phi_piecewise_linear: need matching nodes starting at 0");
  if (at < 0.0 || at > r.back() * (1 + 1e-12))
    throw DomainError("cone_phi_piecewise_linear: r outside the node range");
  if (at == 0.0) return 0.0;
  double int_a = 0.0, int_a2 = 0.0;
  for (std::size_t i = 0; i + 1 < r.size() && r[i] < at; ++i) {
    const double x1 = std::min(r[i + 1], at), h = x1 - r[i];
    const double y0 = A[i], y1 = A[i] + (A[i + 1] - A[i]) * h / (r[i + 1] - r[i]);
    int_a += 0.5 * h * (y0 + y1);
    int_a2 += h * (y0 * y0 + y0 * y1 + y1 * y1) / 3.0;
  }
  const double a_at = Linear{r, A}(at);
  const double R = std::exp(-0.5 * int_a);
  return -(R / (8 * kPi)) * (0.5 * (a_at - A[0]) - 0.25 * int_a2);
}

ReconstructionResult reconstruct_ellipsoidal_potential(const ReceiverWaveform& d,
                                                       const InversionConfig& cfg) {
  check_config(cfg);
  const double T = d.t_end();
  if (!(T >= 1.0)) throw DomainError("reconstruct_ellipsoidal_potential: data must reach t = 1");
  check_causal(d, 1.0, std::max(cfg.tolerance, 1e-12 * d.sup_norm()));

  const int J = static_cast<int>(std::floor((T - 1.0) / cfg.delta + 1e-9));
  ReconstructionResult res;
  res.kind = "ellipsoidal_potential";
  res.layers.push_back(1.0);
  res.values.push_back(8 * kPi * d.at(1.0));
  res.residuals.push_back(0.0);
  res.iterations.push_back(0);

  double C_prev = 0.0;
  for (int j = 1; j <= J; ++j) {
    const double s = 1.0 + j * cfg.delta, data = d.at(s);
    double alpha = 8 * kPi * (data - C_prev);
    std::vector<double> hist;
    double pred = 0.0, last = INFINITY;
    int grew = 0, it = 0;
    for (;; ++it) {
      if (it >= cfg.max_iterations)
        throw NonConvergence("ellipsoidal reconstruction: layer s = " + fmt(s) + " did not converge in " +
                                 std::to_string(cfg.max_iterations) + " iterations",
                             hist);
      std::vector<double> ys = res.values;
      ys.push_back(alpha);
      std::vector<double> xs = res.layers;
      xs.push_back(s);
      const auto prof = ellipsoidal_table(std::move(xs), std::move(ys), cfg.delta);
      pred = prof.is_zero() ? 0.0 : forward::LsField(prof, Vec3{}, s, cfg.ls).v(kFocus, s);
      const double r = data - pred;
      hist.push_back(std::abs(r));
      if (!std::isfinite(r))
        throw NonConvergence("ellipsoidal reconstruction: non-finite residual at layer s = " + fmt(s), hist);
      if (std::abs(r) <= cfg.tolerance) break;
      grew = std::abs(r) >= last ? grew + 1 : 0;
      if (grew >= 3)
        throw NonConvergence("ellipsoidal reconstruction: fixed point diverges at layer s = " + fmt(s), hist);
      last = std::abs(r);
      alpha += cfg.relaxation * 8 * kPi * r;
    }
    C_prev = pred - alpha / (8 * kPi);
    res.layers.push_back(s);
    res.values.push_back(alpha);
    res.residuals.push_back(hist.back());
    res.iterations.push_back(it + 1);
  }
  res.profile = ellipsoidal_table(res.layers, res.values, cfg.delta);
  res.valid_from = 1.0;
  res.valid_to = res.layers.back();
  return res;
}

ReconstructionResult reconstruct_radial_damping(const ReceiverWaveform& d, double A0,
                                                const InversionConfig& cfg) {
  check_config(cfg);
  const double k = cfg.goursat_step;
  if (!(k > 0.0)) throw DomainError("reconstruct_radial_damping: Goursat step must be positive");
  const double ratio = cfg.delta / k;
  const int nsub = static_cast<int>(std::round(ratio));
  if (nsub < 1 || std::abs(ratio - nsub) > 1e-9 * ratio)
    throw DomainError("reconstruct_radial_damping: layer step must be a multiple of the Goursat step");
  if (!std::isfinite(A0)) throw DomainError("reconstruct_radial_damping: A(0) must be finite");
  if (d.t0 > 0.0) throw DomainError("reconstruct_radial_damping: data must start at t = 0");
  const double T = d.t_end();
  const int L = static_cast<int>(std::floor(0.5 * T / cfg.delta + 1e-9));
  if (L < 1) throw DomainError("reconstruct_radial_damping: data shorter than two layer steps");

  ReconstructionResult res;
  res.kind = "radial_damping";
  res.layers = {0.0};
  res.values = {A0};
  res.residuals = {0.0};
  res.iterations = {0};

  const int last_col = 2 * L * nsub;
  forward::GoursatField field(k, 2 * last_col + 4);
  std::vector<double> r_nodes, a_nodes;
  const forward::GoursatField::Coef coef = [&](double r) { return Linear{r_nodes, a_nodes}(r); };
  field.fill_next_column(0.0, coef);

  // Fills columns (J_prev, J + 2] for A(r_l) = alpha, the segment beyond r_l
  // extrapolated, and returns the predicted v(0, 2 r_l) - d(2 r_l).
  auto trial = [&](int l, double alpha) {
    const int Jp = 2 * (l - 1) * nsub, J = 2 * l * nsub;
    field.truncate(Jp);
    r_nodes = res.layers;
    a_nodes = res.values;
    r_nodes.push_back(l * cfg.delta);
    a_nodes.push_back(alpha);
    r_nodes.push_back((l + 1) * cfg.delta);
    a_nodes.push_back(2 * alpha - res.values.back());
    for (int j = Jp + 1; j <= J + 2; ++j)
      field.fill_next_column(cone_phi_piecewise_linear(r_nodes, a_nodes, 0.5 * j * k), coef);
    return field.axis_v(J) - d.at(2 * l * cfg.delta);
  };

  for (int l = 1; l <= L; ++l) {
    const double rl = l * cfg.delta;
    const double prev = res.values.back();
    double x0 = l >= 2 ? 2 * prev - res.values[res.values.size() - 2] : prev;
    double x1 = x0 + std::max(1e-4, 1e-3 * std::abs(x0));
    double f0 = trial(l, x0), f1 = trial(l, x1);
    std::vector<double> hist{std::abs(f0), std::abs(f1)};
    int it = 2;
    if (std::abs(f0) <= cfg.tolerance) {
      x1 = x0;
      f1 = f0;
    }
    while (std::abs(f1) > cfg.tolerance) {
      if (it >= cfg.max_iterations || f1 == f0 || !std::isfinite(f1))
        throw NonConvergence("radial damping reconstruction: root-find failed at layer r = " + fmt(rl),
                             hist);
      const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
      x0 = x1;
      f0 = f1;
      x1 = x2;
      f1 = trial(l, x1);
      hist.push_back(std::abs(f1));
      ++it;
    }
    // Commit columns up to J with the accepted value.
    trial(l, x1);
    field.truncate(2 * l * nsub);
    res.layers.push_back(rl);
    res.values.push_back(x1);
    res.residuals.push_back(std::abs(f1));
    res.iterations.push_back(it);
  }
  res.profile = piecewise_linear_radial(res.layers, res.values);
  res.valid_from = 0.0;
  res.valid_to = res.layers.back();
  return res;
}

ProbeReport monotone_distinguishability_probe(const CoefficientProfile& q1,
                                              const CoefficientProfile& q2, double T,
                                              const forward::LsOptions& ls) {
  if (!(T > 1.0)) throw DomainError("monotone probe: need T > 1");
  ProbeReport rep;
  rep.T = T;
  const double R = std::max({q1.support_radius(), q2.support_radius(), 0.5 * (T + 1.0)});
  const int n = 24;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int l = 0; l <= n; ++l) {
        const Vec3 x{-R + 2 * R * i / n, -R + 2 * R * j / n, -R + 2 * R * l / n};
        const double a = q1(x), b = q2(x);
        if (a < b - 1e-14 * std::max(1.0, std::abs(b)))
          throw DomainError("monotone probe: q1 < q2 at (" + fmt(x.x) + ", " + fmt(x.y) + ", " +
                            fmt(x.z) + ")");
        if (a != b && x.norm() + (x - kFocus).norm() <= T) rep.differ_inside = true;
      }

  // Identical grids for both fields, so differences carry no mesh mismatch.
  forward::LsOptions o = ls;
  o.min_grid_radius = std::max({o.min_grid_radius, q1.support_radius(), q2.support_radius()});
  const auto w1 = forward::LsField(q1, Vec3{}, T, o).waveform(kFocus, o.d_sigma);
  const auto w2 = forward::LsField(q2, Vec3{}, T, o).waveform(kFocus, o.d_sigma);
  forward::LsOptions fine = o;
  fine.d_sigma = 0.5 * o.d_sigma;
  const forward::LsField f2(q2, Vec3{}, T, fine);
  double floor = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < w1.values.size(); ++k) {
    rep.data_difference = std::max(rep.data_difference, std::abs(w1.values[k] - w2.values[k]));
    floor = std::max(floor, std::abs(w2.values[k] - f2.v(kFocus, w2.time(k))));
    scale = std::max({scale, std::abs(w1.values[k]), std::abs(w2.values[k])});
  }
  rep.noise_floor = std::max(floor, 1e-14 * scale);
  rep.ratio = rep.noise_floor > 0.0 ? rep.data_difference / rep.noise_floor
                                    : (rep.data_difference > 0.0 ? INFINITY : 0.0);
  rep.distinguished = rep.data_difference > rep.noise_floor;

  const auto diff = CoefficientProfile::combine(1.0, q1, -1.0, q2);
  const int m = 16;
  double cum = 0.0;
  for (int i = 1; i <= m; ++i) {
    const double tau = 0.5 + (0.5 * T - 0.5) * i / m;
    const double Q = identity::compute_Q(diff, tau);
    if (!rep.tau.empty()) cum += 0.5 * (tau - rep.tau.back()) * (Q + rep.Q.back());
    rep.tau.push_back(tau);
    rep.Q.push_back(Q);
    rep.Q_cumulative.push_back(cum);
  }
  return rep;
}

ReceiverWaveform add_gaussian_noise(const ReceiverWaveform& d, double snr, std::uint64_t seed) {
  if (!(snr > 0.0)) throw DomainError("add_gaussian_noise: SNR must be positive");
  ReceiverWaveform out = d;
  const double sigma = d.sup_norm() / snr;
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, sigma);
  for (double& v : out.values) v += dist(gen);
  out.params["noise_snr"] = fmt(snr);
  out.params["noise_seed"] = std::to_string(seed);
  return out;
}

}  // namespace cw::inversion
