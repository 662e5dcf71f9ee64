#pragma once

#include <functional>
#include <span>
#include <vector>

namespace moran {

/// Adaptive Gauss-Kronrod (15/7) quadrature of f over [a,b] to the given
/// absolute tolerance. Bisects panels where the embedded error estimate is
/// above the locally apportioned tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-10, int max_depth = 40);

/// Cumulative integrals: returns I_k = integral of f over [a, xs[k]] for an
/// ascending sequence xs inside [a, ...]. Each segment is integrated with the
/// adaptive rule, so the result is consistent across the whole sequence.
std::vector<double> integrate_cumulative(const std::function<double(double)>& f, double a,
                                         std::span<const double> xs, double abs_tol = 1e-10);

/// Nodes and weights of the n-point Gauss-Legendre rule on [0,1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Solves a tridiagonal system in place (Thomas algorithm).
/// lower has n-1 entries (row i, column i-1), diag n, upper n-1 (row i, column i+1).
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

}  // namespace moran
