#pragma once

#include <functional>
#include <span>
#include <vector>

namespace moran {

/// Drift parameters of the backward equation
///   df/dt = x(1-x) f'' + x(1-x)(beta + (alpha-beta)x) f',  f(t,0)=0, f(t,1)=1.
/// The frequency-independent case has constant drift gamma, i.e. alpha = beta
/// = gamma; its stationary state is (1 - e^{-gamma x})/(1 - e^{-gamma}).
struct KimuraParams {
    double alpha = 0.0;
    double beta = 0.0;

    static KimuraParams frequency_independent(double gamma) { return {gamma, gamma}; }
    double drift(double x) const { return beta + (alpha - beta) * x; }
};

/// Backward profile on the node grid x_i = i/m, i = 0..m, with f(0)=0, f(1)=1
/// pinned for all time.
struct KimuraSolution {
    KimuraParams params;
    std::vector<double> f;
    double t = 0.0;

    int segments() const { return int(f.size()) - 1; }
    double node(int i) const { return double(i) / segments(); }
    std::vector<double> nodes() const;
};

/// Explicit finite-difference solver in non-conservative form with Dirichlet
/// pins. The second difference carries the exponential fitting factor
/// z coth z (z = drift*h/2), which keeps the drift-dominated stationary state
/// accurate on coarse grids and is exact for constant drift.
class KimuraSolver {
  public:
    KimuraSolver(int segments, KimuraParams params);

    void set_initial(const std::function<double(double)>& f0);
    double stable_dt() const { return stable_dt_; }
    void step(double dt);
    void run(double T);
    /// Runs until the time derivative drops below `rate_tol` in max norm
    /// (or t reaches t_max). Returns the final max rate.
    double run_to_stationary(double rate_tol = 1e-9, double t_max = 10.0);

    const KimuraSolution& solution() const { return sol_; }
    double t() const { return sol_.t; }

    /// Max-norm residual of the backward operator applied to the current
    /// profile (zero at stationarity).
    double stationary_residual() const;

    /// Discrete stationary profile by a direct tridiagonal solve of the same
    /// stencil; reference for the time-stepped limit.
    std::vector<double> stationary_direct() const;

  private:
    void apply_operator(const std::vector<double>& f, std::vector<double>& out) const;

    KimuraSolution sol_;
    int m_;
    double h_;
    std::vector<double> dcoef_;   // x(1-x) at interior nodes
    std::vector<double> drift_;   // drift polynomial at interior nodes
    std::vector<double> fitted_;  // z coth z fitting factor at interior nodes
    std::vector<double> rate_;
    double stable_dt_ = 0.0;
};

/// Advances f0 under the backward equation to time t (explicit stepping).
KimuraSolution solve_kimura(const std::function<double(double)>& f0, KimuraParams params, double t,
                            int segments);

/// A scalar function with two derivatives, as needed by the adjointness
/// integrals.
struct SmoothFn {
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> d2f;
};

/// | int x(1-x)(fbar'' + g fbar') q dx - int fbar [ (x(1-x)q)'' - (g x(1-x) q)' ] dx |
/// with g(x) = beta + (alpha-beta)x, computed by high-order quadrature from
/// the supplied derivatives. The two integrals agree for any fbar vanishing
/// at the endpoints: the backward and forward operators are adjoint.
double adjointness_residual(const SmoothFn& fbar, const SmoothFn& q, KimuraParams params);
double adjointness_residual(const SmoothFn& fbar, const SmoothFn& q, double gamma);

/// Duality map between forward interior densities and backward profiles:
/// g(x) = x(1-x) q(1-x), normalized to unit norm in L^2([0,1], x(1-x)dx).
/// In the neutral case g satisfies the backward equation whenever q satisfies
/// the forward one. Input and output live on the same cell-centered grid.
std::vector<double> duality_map(std::span<const double> centers, std::span<const double> q);

}  // namespace moran
