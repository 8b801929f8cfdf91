#include "conewave/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "conewave/error.hpp"
#include "conewave/quadrature.hpp"

namespace cw {

// ---------------------------------------------------------------------------
// Profile1D

Profile1D Profile1D::sampled(std::vector<double> xs, std::vector<double> ys) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) throw DomainError("Profile1D: need >= 2 samples of equal length");
  for (std::size_t i = 1; i < n; ++i)
    if (!(xs[i] > xs[i - 1])) throw DomainError("Profile1D: coordinates must increase");
  for (double y : ys)
    if (!std::isfinite(y)) throw DomainError("Profile1D: non-finite sample");

  Profile1D p;
  p.lo_ = xs.front();
  p.hi_ = xs.back();
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = xs[i + 1] - xs[i];
    delta[i] = (ys[i + 1] - ys[i]) / h[i];
  }
  // Fritsch-Carlson monotone slopes.
  std::vector<double> d(n, 0.0);
  if (n == 2) {
    d[0] = d[1] = delta[0];
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        d[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1], w2 = h[i] + 2.0 * h[i - 1];
        d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
      double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (s * d0 <= 0.0) s = 0.0;
      else if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) s = 3.0 * d0;
      return s;
    };
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }
  p.prefix_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    p.prefix_[i + 1] = p.prefix_[i] + h[i] * (ys[i] + ys[i + 1]) / 2.0 +
                       h[i] * h[i] * (d[i] - d[i + 1]) / 12.0;
  p.xs_ = std::move(xs);
  p.ys_ = std::move(ys);
  p.slopes_ = std::move(d);
  return p;
}

Profile1D Profile1D::analytic(std::function<double(double)> f, std::function<double(double)> df,
                              double lo, double hi) {
  if (!(hi > lo)) throw DomainError("Profile1D: empty domain");
  Profile1D p;
  p.lo_ = lo;
  p.hi_ = hi;
  p.f_ = std::move(f);
  p.df_ = std::move(df);
  return p;
}

Profile1D Profile1D::zero(double lo, double hi) {
  return analytic([](double) { return 0.0; }, [](double) { return 0.0; }, lo, hi);
}

std::size_t Profile1D::interval(double s) const {
  auto it = std::upper_bound(xs_.begin(), xs_.end(), s);
  std::size_t i = static_cast<std::size_t>(it - xs_.begin());
  i = i == 0 ? 0 : i - 1;
  return std::min(i, xs_.size() - 2);
}

double Profile1D::value(double s) const {
  if (s < lo_ || s > hi_) return 0.0;
  if (!is_sampled()) return f_(s);
  const std::size_t i = interval(s);
  const double h = xs_[i + 1] - xs_[i], t = (s - xs_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * ys_[i] + (t3 - 2 * t2 + t) * h * slopes_[i] +
         (-2 * t3 + 3 * t2) * ys_[i + 1] + (t3 - t2) * h * slopes_[i + 1];
}

double Profile1D::derivative(double s) const {
  if (s < lo_ || s > hi_) return 0.0;
  if (!is_sampled()) return df_(s);
  const std::size_t i = interval(s);
  const double h = xs_[i + 1] - xs_[i], t = (s - xs_[i]) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * ys_[i] + (-6 * t2 + 6 * t) * ys_[i + 1]) / h +
         (3 * t2 - 4 * t + 1) * slopes_[i] + (3 * t2 - 2 * t) * slopes_[i + 1];
}

double Profile1D::primitive(double s) const {
  s = std::clamp(s, lo_, hi_);
  if (!is_sampled()) {
    // Composite Gauss-Legendre: smooth in s, so difference quotients of the
    // primitive stay clean (an adaptive rule would add s-dependent jitter).
    const int panels = std::max(1, static_cast<int>(std::ceil((s - lo_) / 0.0625)));
    const double w = (s - lo_) / panels;
    const GaussRule& rule = gauss_legendre(20);
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double a = lo_ + p * w;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        acc += rule.weights[k] * f_(a + 0.5 * w * (rule.nodes[k] + 1.0));
    }
    return 0.5 * w * acc;
  }
  const std::size_t i = interval(s);
  const double h = xs_[i + 1] - xs_[i], t = (s - xs_[i]) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
  // Integrated Hermite basis over [0, t].
  const double b00 = t4 / 2 - t3 + t, b10 = t4 / 4 - 2 * t3 / 3 + t2 / 2;
  const double b01 = -t4 / 2 + t3, b11 = t4 / 4 - t3 / 3;
  return prefix_[i] + h * (b00 * ys_[i] + b10 * h * slopes_[i] + b01 * ys_[i + 1] +
                           b11 * h * slopes_[i + 1]);
}

// ---------------------------------------------------------------------------
// CoefficientProfile

std::string to_string(Symmetry s) {
  switch (s) {
    case Symmetry::radial: return "radial";
    case Symmetry::ellipsoidal: return "ellipsoidal";
    case Symmetry::general: return "general";
  }
  return "general";
}

Symmetry symmetry_from_string(const std::string& s) {
  if (s == "radial") return Symmetry::radial;
  if (s == "ellipsoidal") return Symmetry::ellipsoidal;
  if (s == "general") return Symmetry::general;
  throw ConfigError("unknown symmetry class '" + s + "'");
}

CoefficientProfile CoefficientProfile::radial(Profile1D shape) {
  if (shape.lo() > 0.0) throw DomainError("radial profile must be defined at r = 0");
  CoefficientProfile p;
  p.symmetry_ = Symmetry::radial;
  p.support_ = shape.hi();
  p.shape_ = std::make_shared<const Profile1D>(std::move(shape));
  return p;
}

CoefficientProfile CoefficientProfile::ellipsoidal(Profile1D shape) {
  if (!(shape.lo() < 1.0)) throw DomainError("ellipsoidal profile domain must start below 1");
  CoefficientProfile p;
  p.symmetry_ = Symmetry::ellipsoidal;
  p.support_ = 0.5 * (shape.hi() + 1.0);
  p.shape_ = std::make_shared<const Profile1D>(std::move(shape));
  return p;
}

CoefficientProfile CoefficientProfile::general(std::function<double(const Vec3&)> q,
                                               double support_radius, bool axisymmetric) {
  CoefficientProfile p;
  p.symmetry_ = Symmetry::general;
  p.support_ = support_radius;
  p.axisymmetric_ = axisymmetric;
  p.eval_ = std::move(q);
  return p;
}

CoefficientProfile CoefficientProfile::zero() {
  CoefficientProfile p = radial(Profile1D::zero(0.0, 1.0));
  p.support_ = 0.0;
  p.is_zero_ = true;
  return p;
}

const Profile1D& CoefficientProfile::shape() const {
  if (!shape_) throw DomainError("general profile has no 1D shape");
  return *shape_;
}

double CoefficientProfile::operator()(const Vec3& x) const {
  if (is_zero_) return 0.0;
  switch (symmetry_) {
    case Symmetry::radial: return shape_->value(x.norm());
    case Symmetry::ellipsoidal: return shape_->value(x.norm() + (x - kFocus).norm());
    case Symmetry::general: return x.norm() > support_ ? 0.0 : eval_(x);
  }
  return 0.0;
}

CoefficientProfile CoefficientProfile::shifted(const Vec3& offset) const {
  if (is_zero_) return zero();
  const bool on_axis = offset.y == 0.0 && offset.z == 0.0;
  CoefficientProfile self = *this;
  return general([self, offset](const Vec3& x) { return self(x + offset); },
                 support_ + offset.norm(), axisymmetric_ && on_axis);
}

CoefficientProfile CoefficientProfile::combine(double alpha, const CoefficientProfile& p,
                                               double beta, const CoefficientProfile& other) {
  return general([alpha, p, beta, other](const Vec3& x) { return alpha * p(x) + beta * other(x); },
                 std::max(p.support_radius(), other.support_radius()),
                 p.axisymmetric() && other.axisymmetric());
}

// ---------------------------------------------------------------------------
// CSV

namespace {
std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace

CoefficientProfile read_profile_csv(std::istream& in) {
  std::string line;
  std::string symmetry;
  double support = -1.0;
  bool seen_header = false;
  std::vector<double> xs, ys;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(line.substr(1, eq - 1));
      const std::string val = trim(line.substr(eq + 1));
      if (key == "symmetry") symmetry = val;
      else if (key == "support") support = std::stod(val);
      continue;
    }
    if (!seen_header) {
      if (line != "coordinate,value")
        throw ConfigError("profile CSV: expected 'coordinate,value' header at line " +
                          std::to_string(lineno));
      seen_header = true;
      continue;
    }
    std::istringstream ls(line);
    std::string a, b;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b))
      throw ConfigError("profile CSV: malformed row at line " + std::to_string(lineno));
    try {
      xs.push_back(std::stod(a));
      ys.push_back(std::stod(b));
    } catch (const std::exception&) {
      throw ConfigError("profile CSV: non-numeric row at line " + std::to_string(lineno));
    }
  }
  if (symmetry.empty()) throw ConfigError("profile CSV: missing '# symmetry = ...' header");
  const Symmetry sym = symmetry_from_string(symmetry);
  if (sym == Symmetry::general) throw ConfigError("profile CSV: general profiles are not tabular");
  Profile1D shape = Profile1D::sampled(std::move(xs), std::move(ys));
  if (support >= 0.0) {
    const double expected = sym == Symmetry::radial ? shape.hi() : 0.5 * (shape.hi() + 1.0);
    if (std::abs(expected - support) > 1e-9 * std::max(1.0, support))
      throw ConfigError("profile CSV: declared support disagrees with table extent");
  }
  return sym == Symmetry::radial ? CoefficientProfile::radial(std::move(shape))
                                 : CoefficientProfile::ellipsoidal(std::move(shape));
}

CoefficientProfile load_profile_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile file '" + path + "'");
  return read_profile_csv(in);
}

void write_profile_csv(std::ostream& out, const CoefficientProfile& p) {
  if (p.symmetry() == Symmetry::general)
    throw DomainError("write_profile_csv: general profiles are not tabular");
  const Profile1D& s = p.shape();
  out << "# symmetry = " << to_string(p.symmetry()) << '\n'
      << "# support = " << std::setprecision(17) << p.support_radius() << '\n'
      << "coordinate,value\n";
  if (s.is_sampled()) {
    for (std::size_t i = 0; i < s.xs().size(); ++i) out << s.xs()[i] << ',' << s.ys()[i] << '\n';
  } else {
    const int n = 201;
    for (int i = 0; i < n; ++i) {
      const double x = s.lo() + (s.hi() - s.lo()) * i / (n - 1);
      out << x << ',' << s.value(x) << '\n';
    }
  }
}

}  // namespace cw
