#include "moran/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace moran {

namespace {

// 15-point Kronrod nodes on [-1,1] and weights; the embedded 7-point Gauss
// rule uses the odd-indexed nodes.
constexpr double kx[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double kw[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double gw[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870};

struct PanelResult {
    double value;
    double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    double resk = 0.0, resg = 0.0;
    for (int i = 0; i < 15; ++i) {
        const double v = f(c + h * kx[i]);
        resk += kw[i] * v;
        if (i % 2 == 1) resg += gw[i / 2] * v;
    }
    return {resk * h, std::abs(resk - resg) * h};
}

double adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                int depth, int max_depth) {
    const PanelResult r = gk15(f, a, b);
    if (r.error <= tol || depth >= max_depth) return r.value;
    const double c = 0.5 * (a + b);
    return adaptive(f, a, c, 0.5 * tol, depth + 1, max_depth) +
           adaptive(f, c, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 int max_depth) {
    if (a == b) return 0.0;
    return adaptive(f, a, b, abs_tol, 0, max_depth);
}

std::vector<double> integrate_cumulative(const std::function<double(double)>& f, double a,
                                         std::span<const double> xs, double abs_tol) {
    std::vector<double> out(xs.size());
    double acc = 0.0;
    double lo = a;
    const double seg_tol = abs_tol / double(xs.size() + 1);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (xs[k] < lo) throw std::invalid_argument("integrate_cumulative: xs must be ascending");
        acc += integrate(f, lo, xs[k], seg_tol);
        out[k] = acc;
        lo = xs[k];
    }
    return out;
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    // Newton iteration on Legendre polynomials, standard symmetric construction.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        const double w = 1.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs) {
    const std::size_t n = diag.size();
    if (lower.size() != n - 1 || upper.size() != n - 1 || rhs.size() != n)
        throw std::invalid_argument("solve_tridiagonal: inconsistent sizes");
    std::vector<double> c(n), d(n);
    double piv = diag[0];
    if (piv == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
    c[0] = upper.size() ? upper[0] / piv : 0.0;
    d[0] = rhs[0] / piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = diag[i] - lower[i - 1] * c[i - 1];
        if (piv == 0.0) throw std::runtime_error("solve_tridiagonal: zero pivot");
        c[i] = (i < n - 1) ? upper[i] / piv : 0.0;
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / piv;
    }
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
    return d;
}

}  // namespace moran
