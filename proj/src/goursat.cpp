#include "conewave/goursat.hpp"

#include <cmath>
#include <sstream>

#include "conewave/error.hpp"
#include "conewave/greens.hpp"

namespace cw::forward {

std::string to_string(Kind k) { return k == Kind::potential ? "potential" : "damping"; }

Kind kind_from_string(const std::string& s) {
  if (s == "potential") return Kind::potential;
  if (s == "damping") return Kind::damping;
  throw ConfigError("unknown equation kind '" + s + "' (expected potential or damping)");
}

GoursatField::GoursatField(double step, int max_sum) : k_(step), m_(max_sum) {
  if (!(step > 0.0) || max_sum < 4) throw DomainError("GoursatField: need step > 0 and at least 4 diagonals");
  cols_.reserve(static_cast<std::size_t>(max_sum) + 1);
}

int GoursatField::column_size(int j) const { return std::min(j, m_ - j) + 1; }

double GoursatField::node(int i, int j) const {
  if (i > j) return -node(j, i);
  if (i < 0 || j > filled() || i >= column_size(j))
    throw DomainError("GoursatField: node (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") outside the computed region");
  return cols_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
}

void GoursatField::fill_next_column(double cone_phi, const Coef& damping, const Coef& potential,
                                    const Source& source) {
  const int j = filled() + 1;
  if (j > m_) throw DomainError("GoursatField: all columns already filled");
  std::vector<double> col(static_cast<std::size_t>(column_size(j)));
  col[0] = j == 0 ? 0.0 : cone_phi;
  for (int i = 1; i < column_size(j); ++i) {
    if (i == j) {
      col[static_cast<std::size_t>(i)] = 0.0;
      continue;
    }
    const double s = node(i - 1, j - 1), e = node(i, j - 1), w = col[static_cast<std::size_t>(i - 1)];
    const double r = 0.5 * (j - i) * k_, t = 0.5 * (i + j - 1) * k_;
    const double a = damping ? damping(r) : 0.0;
    const double q = potential ? 0.25 * k_ * k_ * potential(r) : 0.0;
    const double f = source ? k_ * k_ * source(r, t) : 0.0;
    col[static_cast<std::size_t>(i)] =
        (4.0 * (e + w - s) + k_ * a * s + q * (e + w + s) + f) / (4.0 + k_ * a - q);
  }
  cols_.push_back(std::move(col));
}

void GoursatField::truncate(int j) {
  if (j < -1) throw DomainError("GoursatField: truncate below -1");
  if (j < filled()) cols_.resize(static_cast<std::size_t>(j + 1));
}

double GoursatField::axis_v(int m) const {
  if (m < 0 || 2 * m > m_) throw DomainError("GoursatField: axis time outside the grid");
  if (m == 0) return 2.0 * node(0, 1) / (0.5 * k_) - node(0, 2) / k_;
  if (m == 1) return 0.5 * (axis_v(0) + axis_v(2));
  const double f1 = node(m - 1, m + 1) / k_, f2 = node(m - 2, m + 2) / (2.0 * k_);
  return (4.0 * f1 - f2) / 3.0;
}

double GoursatField::phi(double r, double t) const {
  if (r < 0.0) return -phi(-r, t);
  if (t < r - 1e-12 * k_) return 0.0;
  const double xi = std::max(0.0, (t - r) / k_), eta = (t + r) / k_;
  if (xi + eta > m_ + 1e-9 || eta > filled() + 1e-9)
    throw DomainError("GoursatField: (r, t) outside the computed region");
  const int i0 = static_cast<int>(std::floor(xi)), j0 = static_cast<int>(std::floor(eta));
  const double fx = xi - i0, fy = eta - j0;
  if (fx == 0.0 && fy == 0.0) return node(i0, j0);
  const double a = node(i0, j0);
  const double b = fx > 0.0 ? node(i0 + 1, j0) : a;
  const double c = fy > 0.0 ? node(i0, j0 + 1) : a;
  if (fx > 0.0 && fy > 0.0 && i0 + j0 + 2 <= m_ && j0 + 1 <= filled()) {
    const double d = node(i0 + 1, j0 + 1);
    return (1 - fx) * (1 - fy) * a + fx * (1 - fy) * b + (1 - fx) * fy * c + fx * fy * d;
  }
  return a + (b - a) * fx + (c - a) * fy;
}

double GoursatField::v(double r, double t) const {
  if (r >= k_ || (r > 0.0 && t < k_)) return phi(r, t) / r;
  const double pos = t / k_;
  const int mmax = m_ / 2;
  const int m0 = std::min(static_cast<int>(std::floor(pos)), mmax - 1);
  const double f = pos - m0;
  const double axis = (1 - f) * axis_v(m0) + f * axis_v(m0 + 1);
  if (r == 0.0) return axis;
  const double w = r / k_;
  return (1 - w) * axis + w * phi(k_, t) / k_;
}

double GoursatField::dphi_dt(double r, double t) const {
  const double d = k_;
  const double t_hi = std::min(t_max(), filled() * k_ - r);
  if (t - d >= r && t + d <= t_hi) return (phi(r, t + d) - phi(r, t - d)) / (2 * d);
  if (t + 2 * d <= t_hi) return (-3 * phi(r, t) + 4 * phi(r, t + d) - phi(r, t + 2 * d)) / (2 * d);
  return (3 * phi(r, t) - 4 * phi(r, t - d) + phi(r, t - 2 * d)) / (2 * d);
}

namespace {

int diagonal_count(double T, double h) {
  if (!(T > 0.0) || !(h > 0.0)) throw DomainError("radial solve: need T > 0 and h > 0");
  const double n = std::round(T / h);
  if (std::abs(n * h - T) > 1e-9 * T) throw DomainError("radial solve: h must divide T");
  if (n < 2) throw DomainError("radial solve: need T >= 2h");
  return static_cast<int>(n);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

RadialSolution solve_once(const RadialProblem& p) {
  const CoefficientProfile& c = p.coefficient;
  if (!c.is_zero() && c.symmetry() != Symmetry::radial)
    throw DomainError("radial solve: coefficient must be radial");
  const int n = diagonal_count(p.T, p.h);
  GoursatField field(p.h, 2 * n);

  GoursatField::Coef coef;
  if (!c.is_zero()) coef = [&c](double r) { return c(Vec3{r, 0, 0}); };
  const GoursatField::Coef damping = p.kind == Kind::damping ? coef : GoursatField::Coef{};
  const GoursatField::Coef potential = p.kind == Kind::potential ? coef : GoursatField::Coef{};

  for (int j = 0; j <= 2 * n; ++j) {
    const double r = 0.5 * j * p.h;
    double cone = 0.0;
    if (p.cone_phi) cone = p.cone_phi(r);
    else if (!c.is_zero() && j > 0)
      cone = r * (p.kind == Kind::damping ? greens::goursat_trace_damping(c, r)
                                          : greens::goursat_trace_potential(c, Vec3{r, 0, 0}));
    field.fill_next_column(cone, damping, potential, p.source);
  }

  ReceiverWaveform w;
  w.t0 = 0.0;
  w.dt = p.h;
  w.values.resize(static_cast<std::size_t>(n) + 1);
  for (int m = 0; m <= n; ++m) w.values[static_cast<std::size_t>(m)] = field.axis_v(m);
  w.singular = SingularPart{0.0, 1.0};
  w.solver = "goursat";
  w.params["kind"] = to_string(p.kind);
  w.params["h"] = fmt(p.h);
  w.params["T"] = fmt(p.T);
  return RadialSolution{std::move(w), std::move(field), -1.0};
}

}  // namespace

RadialSolution radial_goursat_solve(const RadialProblem& problem) {
  RadialSolution coarse = solve_once(problem);
  if (problem.tolerance > 0.0) {
    RadialProblem half = problem;
    half.h = 0.5 * problem.h;
    half.tolerance = 0.0;
    const RadialSolution fine = solve_once(half);
    double err = 0.0;
    for (std::size_t m = 0; m < coarse.at_origin.values.size(); ++m)
      err = std::max(err, std::abs(coarse.at_origin.values[m] - fine.at_origin.values[2 * m]) / 3.0);
    coarse.richardson_error = err;
    coarse.at_origin.params["richardson_error"] = fmt(err);
    if (err > problem.tolerance)
      throw NonConvergence("radial solve: Richardson error estimate " + fmt(err) +
                               " exceeds tolerance " + fmt(problem.tolerance) + "; reduce h",
                           {err});
  }
  return coarse;
}

RadialSolution radial_damping_solve(const CoefficientProfile& A, double T, double h,
                                    double tolerance) {
  RadialProblem p;
  p.kind = Kind::damping;
  p.coefficient = A;
  p.T = T;
  p.h = h;
  p.tolerance = tolerance;
  return radial_goursat_solve(p);
}

}  // namespace cw::forward
