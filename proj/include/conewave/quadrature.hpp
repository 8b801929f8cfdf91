#pragma once

#include <functional>
#include <span>
#include <vector>

namespace cw {

/// Selects the serial reference path or the OpenMP path of a kernel.
/// Both paths produce bit-identical results: per-node values are stored and
/// reduced in a fixed order.
enum class Exec { serial, parallel };

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, computed by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

/// Same rule mapped affinely onto [a, b].
GaussRule gauss_legendre(int n, double a, double b);

/// Pairwise (cascade) summation; deterministic for a given input order.
double pairwise_sum(std::span<const double> v);

/// Adaptive Gauss-Kronrod (15-point) line integral. Throws NonConvergence
/// when the error estimate stays above abs_tol.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-10);

/// Same, split at the given interior points (kinks of the integrand).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const std::vector<double>& breaks, double abs_tol = 1e-10);

}  // namespace cw
