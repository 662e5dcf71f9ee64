#include "moran/kimura.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "moran/quadrature.hpp"

namespace moran {

std::vector<double> KimuraSolution::nodes() const {
    std::vector<double> xs(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) xs[i] = double(i) / segments();
    return xs;
}

KimuraSolver::KimuraSolver(int segments, KimuraParams params) : m_(segments) {
    if (segments < 4) throw std::invalid_argument("KimuraSolver: need at least 4 segments");
    sol_.params = params;
    sol_.f.assign(m_ + 1, 0.0);
    sol_.f[m_] = 1.0;
    h_ = 1.0 / m_;
    dcoef_.resize(m_ - 1);
    drift_.resize(m_ - 1);
    fitted_.resize(m_ - 1);
    double wmax = 0.0;
    for (int i = 1; i < m_; ++i) {
        const double x = i * h_;
        dcoef_[i - 1] = x * (1.0 - x);
        drift_[i - 1] = params.drift(x);
        const double z = 0.5 * drift_[i - 1] * h_;
        fitted_[i - 1] = std::abs(z) < 1e-8 ? 1.0 + z * z / 3.0 : z / std::tanh(z);
        wmax = std::max(wmax, dcoef_[i - 1] * fitted_[i - 1]);
    }
    stable_dt_ = 0.45 * h_ * h_ / wmax;
    rate_.resize(m_ - 1);
}

void KimuraSolver::set_initial(const std::function<double(double)>& f0) {
    for (int i = 0; i <= m_; ++i) sol_.f[i] = f0(i * h_);
    if (sol_.f[0] != 0.0 || sol_.f[m_] != 1.0)
        throw std::invalid_argument("KimuraSolver: initial profile must satisfy f(0)=0, f(1)=1");
    sol_.t = 0.0;
}

void KimuraSolver::apply_operator(const std::vector<double>& f, std::vector<double>& out) const {
    const double ih2 = 1.0 / (h_ * h_);
    const double ih = 0.5 / h_;
    for (int i = 1; i < m_; ++i) {
        const double lap = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * ih2;
        const double grad = (f[i + 1] - f[i - 1]) * ih;
        out[i - 1] = dcoef_[i - 1] * (fitted_[i - 1] * lap + drift_[i - 1] * grad);
    }
}

void KimuraSolver::step(double dt) {
    if (dt > stable_dt_ * (1.0 + 1e-12))
        throw std::invalid_argument("KimuraSolver::step: dt exceeds the stability bound");
    apply_operator(sol_.f, rate_);
    for (int i = 1; i < m_; ++i) sol_.f[i] += dt * rate_[i - 1];
    sol_.t += dt;
}

void KimuraSolver::run(double T) {
    if (T < sol_.t) throw std::invalid_argument("KimuraSolver::run: T is in the past");
    if (T > sol_.t) {
        const long n = std::max(1L, long(std::ceil((T - sol_.t) / stable_dt_)));
        const double dt = (T - sol_.t) / double(n);
        for (long i = 0; i < n; ++i) step(dt);
    }
    sol_.t = T;
}

double KimuraSolver::run_to_stationary(double rate_tol, double t_max) {
    double rate = stationary_residual();
    while (rate > rate_tol && sol_.t < t_max) {
        run(std::min(sol_.t + 0.25, t_max));
        rate = stationary_residual();
    }
    return rate;
}

double KimuraSolver::stationary_residual() const {
    std::vector<double> r(m_ - 1);
    apply_operator(sol_.f, r);
    double mx = 0.0;
    for (double v : r) mx = std::max(mx, std::abs(v));
    return mx;
}

std::vector<double> KimuraSolver::stationary_direct() const {
    // interior rows of fitted*lap + drift*grad = 0 (the x(1-x) factor divides out)
    const int n = m_ - 1;
    std::vector<double> lo(n - 1), di(n), up(n - 1), rhs(n, 0.0);
    const double ih2 = 1.0 / (h_ * h_);
    const double ih = 0.5 / h_;
    for (int i = 1; i < m_; ++i) {
        const int k = i - 1;
        const double cl = fitted_[k] * ih2 - drift_[k] * ih;
        const double cc = -2.0 * fitted_[k] * ih2;
        const double cr = fitted_[k] * ih2 + drift_[k] * ih;
        di[k] = cc;
        if (k > 0) lo[k - 1] = cl;
        if (k < n - 1) up[k] = cr;
        if (i == m_ - 1) rhs[k] -= cr * 1.0;  // f(1) = 1
    }
    std::vector<double> inner = solve_tridiagonal(lo, di, up, rhs);
    std::vector<double> f(m_ + 1);
    f[0] = 0.0;
    f[m_] = 1.0;
    for (int i = 1; i < m_; ++i) f[i] = inner[i - 1];
    return f;
}

KimuraSolution solve_kimura(const std::function<double(double)>& f0, KimuraParams params, double t,
                            int segments) {
    KimuraSolver solver(segments, params);
    solver.set_initial(f0);
    solver.run(t);
    return solver.solution();
}

namespace {

double adjointness_residual_impl(const SmoothFn& fbar, const SmoothFn& q, double alpha,
                                 double beta) {
    auto g = [&](double x) { return beta + (alpha - beta) * x; };
    auto lhs = [&](double x) {
        const double D = x * (1.0 - x);
        return D * (fbar.d2f(x) + g(x) * fbar.df(x)) * q.f(x);
    };
    auto rhs = [&](double x) {
        const double D = x * (1.0 - x);
        const double Dp = 1.0 - 2.0 * x;
        const double w = D * q.f(x);
        const double wp = Dp * q.f(x) + D * q.df(x);
        const double wpp = -2.0 * q.f(x) + 2.0 * Dp * q.df(x) + D * q.d2f(x);
        const double gp = alpha - beta;
        return fbar.f(x) * (wpp - (gp * w + g(x) * wp));
    };
    const double a = integrate(lhs, 0.0, 1.0, 1e-12);
    const double b = integrate(rhs, 0.0, 1.0, 1e-12);
    return std::abs(a - b);
}

}  // namespace

double adjointness_residual(const SmoothFn& fbar, const SmoothFn& q, KimuraParams params) {
    return adjointness_residual_impl(fbar, q, params.alpha, params.beta);
}

double adjointness_residual(const SmoothFn& fbar, const SmoothFn& q, double gamma) {
    return adjointness_residual_impl(fbar, q, gamma, gamma);
}

std::vector<double> duality_map(std::span<const double> centers, std::span<const double> q) {
    if (centers.size() != q.size() || q.size() < 2)
        throw std::invalid_argument("duality_map: bad grid");
    const std::size_t m = q.size();
    std::vector<double> g(m);
    // cell-centered grids are symmetric: center(m-1-j) = 1 - center(j)
    for (std::size_t j = 0; j < m; ++j) {
        const double x = centers[j];
        g[j] = x * (1.0 - x) * q[m - 1 - j];
    }
    const double dx = centers[1] - centers[0];
    double norm2 = 0.0;
    for (std::size_t j = 0; j < m; ++j)
        norm2 += g[j] * g[j] * centers[j] * (1.0 - centers[j]) * dx;
    const double norm = std::sqrt(norm2);
    if (norm > 0.0)
        for (double& v : g) v /= norm;
    return g;
}

}  // namespace moran
