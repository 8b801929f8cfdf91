#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "conewave/vec3.hpp"

namespace cw {

/// One-dimensional coefficient shape: either a table with monotone piecewise
/// cubic Hermite interpolation (C1) or an analytic function with derivative.
/// Zero outside [lo, hi].
class Profile1D {
 public:
  static Profile1D sampled(std::vector<double> xs, std::vector<double> ys);
  static Profile1D analytic(std::function<double(double)> f, std::function<double(double)> df,
                            double lo, double hi);
  static Profile1D zero(double lo, double hi);

  double value(double s) const;
  double derivative(double s) const;
  /// Integral of the shape over [lo, s] (s clamped into the domain).
  double primitive(double s) const;

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool is_sampled() const { return !xs_.empty(); }
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

 private:
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<double> xs_, ys_, slopes_, prefix_;
  std::function<double(double)> f_, df_;
  std::size_t interval(double s) const;
};

enum class Symmetry { general, radial, ellipsoidal };

std::string to_string(Symmetry s);
Symmetry symmetry_from_string(const std::string& s);

/// Coefficient q on R^3 in one of three symmetry classes:
///   radial       q(x) = A(|x|)
///   ellipsoidal  q(x) = a(|x| + |x - e|)
///   general      black-box evaluator with a declared support radius
class CoefficientProfile {
 public:
  static CoefficientProfile radial(Profile1D shape);
  static CoefficientProfile ellipsoidal(Profile1D shape);
  /// axisymmetric: q depends on x only through (x1, x2^2 + x3^2).
  static CoefficientProfile general(std::function<double(const Vec3&)> q, double support_radius,
                                    bool axisymmetric = false);
  static CoefficientProfile zero();

  /// q(. + offset), e.g. the coefficient seen from a source placed at offset.
  CoefficientProfile shifted(const Vec3& offset) const;
  /// alpha * this + beta * other.
  static CoefficientProfile combine(double alpha, const CoefficientProfile& p, double beta,
                                    const CoefficientProfile& other);

  double operator()(const Vec3& x) const;

  Symmetry symmetry() const { return symmetry_; }
  /// q vanishes for |x| > support_radius().
  double support_radius() const { return support_; }
  bool axisymmetric() const { return axisymmetric_; }
  bool is_zero() const { return is_zero_; }
  const Profile1D& shape() const;

 private:
  Symmetry symmetry_ = Symmetry::general;
  double support_ = 0.0;
  bool axisymmetric_ = true;
  bool is_zero_ = false;
  std::shared_ptr<const Profile1D> shape_;
  std::function<double(const Vec3&)> eval_;
};

/// CSV table: '#'-prefixed "key = value" header lines (symmetry, support),
/// a "coordinate,value" header row, then one sample per line.
CoefficientProfile read_profile_csv(std::istream& in);
CoefficientProfile load_profile_csv(const std::string& path);
void write_profile_csv(std::ostream& out, const CoefficientProfile& p);

}  // namespace cw
