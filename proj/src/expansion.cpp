#include "moran/expansion.hpp"

#include <cmath>
#include <stdexcept>

namespace moran {

namespace {

struct PolyFit {
    std::vector<double> coef;  // coefficients in the normalized variable u/u0
    double residual = 0.0;
};

// Least-squares fit of y ~ sum_i coef_i * (u/u0)^i with u0 = max|u|; returns
// coefficients in the raw variable u.
PolyFit fit_powers(std::span<const double> us, std::span<const double> ys, int order) {
    const int n = int(us.size());
    const int m = order + 1;
    if (n < m) throw std::invalid_argument("fit_powers: not enough samples for the order");
    double u0 = 0.0;
    for (double u : us) u0 = std::max(u0, std::abs(u));
    // normal equations on the normalized Vandermonde (m <= 4, well conditioned)
    std::vector<double> A(m * m, 0.0), b(m, 0.0);
    for (int k = 0; k < n; ++k) {
        double pw[8];
        pw[0] = 1.0;
        for (int i = 1; i < m; ++i) pw[i] = pw[i - 1] * (us[k] / u0);
        for (int i = 0; i < m; ++i) {
            b[i] += pw[i] * ys[k];
            for (int j = 0; j < m; ++j) A[i * m + j] += pw[i] * pw[j];
        }
    }
    // gaussian elimination with partial pivoting
    std::vector<int> piv(m);
    for (int i = 0; i < m; ++i) piv[i] = i;
    for (int col = 0; col < m; ++col) {
        int best = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(A[r * m + col]) > std::abs(A[best * m + col])) best = r;
        if (best != col) {
            for (int j = 0; j < m; ++j) std::swap(A[col * m + j], A[best * m + j]);
            std::swap(b[col], b[best]);
        }
        const double p = A[col * m + col];
        if (p == 0.0) throw std::runtime_error("fit_powers: singular normal equations");
        for (int r = col + 1; r < m; ++r) {
            const double f = A[r * m + col] / p;
            for (int j = col; j < m; ++j) A[r * m + j] -= f * A[col * m + j];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> c(m);
    for (int i = m - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < m; ++j) s -= A[i * m + j] * c[j];
        c[i] = s / A[i * m + i];
    }
    PolyFit out;
    out.coef.resize(m);
    double scale = 1.0;
    for (int i = 0; i < m; ++i) {
        out.coef[i] = c[i] * scale;
        scale /= u0;
    }
    for (int k = 0; k < n; ++k) {
        double fit = 0.0, pw = 1.0;
        for (int i = 0; i < m; ++i) {
            fit += out.coef[i] * pw;
            pw *= us[k];
        }
        out.residual = std::max(out.residual, std::abs(fit - ys[k]));
    }
    return out;
}

struct ShiftedSamples {
    double cp, c0, cm;  // c_+(xM-1), c_0(xM), c_-(xM+1)
};

ShiftedSamples sample_shifted(const PayoffMatrix& g, int M, double x, KernelVariant variant) {
    const KernelPoint atm = kernel_probabilities(g, M, x * M, variant);
    ShiftedSamples s;
    s.cp = kernel_probabilities(g, M, x * M - 1.0, variant).cplus;
    s.cm = kernel_probabilities(g, M, x * M + 1.0, variant).cminus;
    s.c0 = 1.0 - atm.cplus - atm.cminus;
    return s;
}

}  // namespace

std::vector<double> default_expansion_grid() {
    std::vector<double> xs(101);
    for (int i = 0; i < 101; ++i) xs[i] = 0.05 + 0.9 * i / 100.0;
    return xs;
}

KernelExpansion expand_kernel(const ScaledGame& game, std::span<const double> x_grid,
                              std::span<const int> N_list, KernelVariant variant) {
    if (N_list.size() < 3)
        throw std::invalid_argument("expand_kernel: need at least 3 population sizes");
    for (std::size_t i = 1; i < N_list.size(); ++i) {
        if (N_list[i] <= N_list[i - 1])
            throw std::invalid_argument("expand_kernel: N_list must be strictly increasing");
        if (N_list[i] < N_list[i - 1] * 3 / 2)
            throw std::invalid_argument("expand_kernel: N_list values too close for extrapolation");
    }
    const int Nmin = N_list.front();
    for (double x : x_grid)
        if (x * Nmin - 1.0 < 0.5 || x * Nmin + 1.0 > Nmin - 0.5)
            throw std::invalid_argument("expand_kernel: x grid too close to the boundary for N_list");

    KernelExpansion out;
    out.x.assign(x_grid.begin(), x_grid.end());
    const std::size_t nx = x_grid.size();
    for (auto* arr : {&out.order0, &out.order1, &out.order2})
        for (auto& v : *arr) v.resize(nx);
    out.drift.resize(nx);
    out.first_order_sum.resize(nx);

    std::vector<double> invM(N_list.size());
    for (std::size_t i = 0; i < N_list.size(); ++i) invM[i] = 1.0 / N_list[i];
    std::vector<double> deltas(N_list.size());
    for (std::size_t i = 0; i < N_list.size(); ++i)
        deltas[i] = std::pow(double(N_list[i]), -game.nu);

    const PayoffMatrix ref = game.finite_payoffs(N_list.back());

    std::vector<double> ys(N_list.size());
    std::vector<double> drift_y(N_list.size()), sum_y(N_list.size());
    for (std::size_t k = 0; k < nx; ++k) {
        const double x = x_grid[k];

        // stage one at the reference payoffs: the per-star coefficients
        std::vector<ShiftedSamples> samples(N_list.size());
        for (std::size_t i = 0; i < N_list.size(); ++i)
            samples[i] = sample_shifted(ref, N_list[i], x, variant);
        for (int star = 0; star < 3; ++star) {
            for (std::size_t i = 0; i < N_list.size(); ++i)
                ys[i] = star == 0 ? samples[i].cp : (star == 1 ? samples[i].c0 : samples[i].cm);
            const PolyFit fit = fit_powers(invM, ys, 2);
            out.order0[star][k] = fit.coef[0];
            out.order1[star][k] = fit.coef[1];
            out.order2[star][k] = 2.0 * fit.coef[2];
            out.fit_residual = std::max(out.fit_residual, fit.residual);
        }

        // stage two: payoff-scaling limits of the combinations. For each N the
        // inner Richardson pass removes the finite-M index corrections at fixed
        // payoffs; the outer fit extrapolates in delta = N^-nu.
        for (std::size_t i = 0; i < N_list.size(); ++i) {
            const PayoffMatrix g = game.finite_payoffs(N_list[i]);
            for (std::size_t j = 0; j < N_list.size(); ++j) {
                const int M = N_list[j];
                const KernelPoint p = kernel_probabilities(g, M, x * M, variant);
                ys[j] = p.cplus - p.cminus;
            }
            drift_y[i] = fit_powers(invM, ys, 2).coef[0] / deltas[i];
            for (std::size_t j = 0; j < N_list.size(); ++j) {
                const ShiftedSamples s = sample_shifted(g, N_list[j], x, variant);
                ys[j] = s.cp + s.c0 + s.cm - 1.0;
            }
            sum_y[i] = fit_powers(invM, ys, 2).coef[1] / deltas[i];
        }
        const PolyFit dfit = fit_powers(deltas, drift_y, 2);
        out.drift[k] = dfit.coef[0];
        out.drift_residual = std::max(out.drift_residual, dfit.residual);
        const PolyFit sfit = fit_powers(deltas, sum_y, 2);
        out.first_order_sum[k] = sfit.coef[0];
        out.first_order_sum_residual = std::max(out.first_order_sum_residual, sfit.residual);
    }
    return out;
}

double drift_limit(double alpha, double beta, double x) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("drift_limit: x must be in [0,1]");
    return x * (1.0 - x) * (x * alpha + (1.0 - x) * beta);
}

double drift_limit(const ScaledGame& game, double x) {
    return drift_limit(game.alpha(), game.beta(), x);
}

Balance classify_balance(double nu, double dt_exponent) {
    if (!(nu > 0.0) || !(dt_exponent > 0.0))
        throw std::invalid_argument("classify_balance: exponents must be positive");
    const double tol = 1e-12;
    if (std::abs(dt_exponent - (nu + 1.0)) > tol) return Balance::Degenerate;
    if (std::abs(nu - 1.0) <= tol) return Balance::DriftDiffusion;
    if (nu < 1.0) return Balance::DriftOnly;
    return Balance::Degenerate;
}

}  // namespace moran
