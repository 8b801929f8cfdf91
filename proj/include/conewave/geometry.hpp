#pragma once

// Prolate-spheroidal coordinates for the confocal family |x| + |x - e| = const
// with foci 0 and e = (1, 0, 0):
//
//   x1 = 1/2 + 1/2 cosh(rho) cos(phi)
//   x2 = 1/2 sinh(rho) sin(theta) sin(phi)
//   x3 = 1/2 sinh(rho) cos(theta) sin(phi)
//
// so that |x| = (cosh rho + cos phi)/2 and |x - e| = (cosh rho - cos phi)/2.
//
// Surface integrals use u = cos(phi) as the polar variable, Gauss-Legendre in u
// and the periodic trapezoid rule in theta. Volume integrals additionally use
// c = cosh(rho), since sinh(rho) d(rho) = dc.
//
// Reduction used throughout: on the slice cosh(rho) = 2 tau,
//   dS / |2 tau x - |x| e| = 1/2 sin(phi) d(theta) d(phi),
// hence Q(2 tau) = 2 pi a(2 tau) for q = a(|x| + |x - e|).

#include <functional>
#include <vector>

#include "conewave/quadrature.hpp"
#include "conewave/vec3.hpp"

namespace cw::geometry {

struct ProlatePoint {
  double rho = 0.0;    // cosh(rho) = |x| + |x - e|
  double theta = 0.0;  // [0, 2 pi)
  double phi = 0.0;    // [0, pi]
};

struct ProlateLookup {
  ProlatePoint point;
  /// theta is undefined (reported as 0) because x lies on the x1 axis.
  bool degenerate_theta = false;
  /// x lies on the focal segment {(s, 0, 0) : 0 < s < 1}.
  bool on_focal_segment = false;
};

Vec3 prolate_to_cartesian(const ProlatePoint& p);
ProlateLookup cartesian_to_prolate(const Vec3& x);

/// dS density per d(theta) d(phi) on the slice of fixed rho.
double surface_density(const ProlatePoint& p);
/// dx density per d(rho) d(theta) d(phi).
double volume_density(const ProlatePoint& p);

/// |2 tau x - |x| e| on the slice cosh(rho) = 2 tau, in closed form.
/// Throws DomainError for tau <= 1/2.
double ellipsoid_weight(double tau, const ProlatePoint& p);

/// Surface area and volume of the prolate spheroid |x| + |x - e| = 2 tau.
double spheroid_area(double tau);
double spheroid_volume(double tau);

struct SliceNode {
  ProlatePoint point;
  Vec3 x;
  double weight = 0.0;  // includes the surface measure
};

/// Quadrature for the surface |x| + |x - e| = 2 tau.
struct EllipsoidSlice {
  double tau = 0.0;
  int n_phi = 0;
  int n_theta = 0;
  std::vector<SliceNode> nodes;
};

/// Throws DomainError for tau <= 1/2 or non-positive node counts.
EllipsoidSlice make_slice(double tau, int n_phi, int n_theta);

using ScalarField = std::function<double(const Vec3&)>;

struct QuadratureOrder {
  int n_phi = 48;
  int n_theta = 64;
  int n_rho = 48;  // volume integrals only
};

/// Integral of f over the surface |x| + |x - e| = 2 tau (f dS).
/// Non-finite samples raise DomainError naming the node.
double surface_integral(double tau, const ScalarField& f, const QuadratureOrder& order = {},
                        Exec exec = Exec::parallel);

/// Integral of f over the solid |x| + |x - e| <= 2 tau (f dx).
double volume_integral(double tau, const ScalarField& f, const QuadratureOrder& order = {},
                       Exec exec = Exec::parallel);

}  // namespace cw::geometry
