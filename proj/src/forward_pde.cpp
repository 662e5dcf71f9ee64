#include "moran/forward_pde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "moran/quadrature.hpp"

namespace moran {

namespace {

inline double minmod(double a, double b) {
    return a * b > 0.0 ? (std::abs(a) < std::abs(b) ? a : b) : 0.0;
}

inline double drift_poly(double alpha, double beta, double x) {
    return beta + (alpha - beta) * x;
}

}  // namespace

std::vector<double> DensityField::centers() const {
    std::vector<double> xs(cells);
    for (int j = 0; j < cells; ++j) xs[j] = center(j);
    return xs;
}

double DensityField::interior_mass() const {
    double s = 0.0;
    for (double v : q) s += v;
    return s / cells;
}

double DensityField::norm_l2() const {
    double s = 0.0;
    for (double v : q) s += v * v;
    return std::sqrt(s / cells);
}

DensityField make_field(int cells, const std::function<double(double)>& p0, double a0, double b0,
                        bool* renormalized) {
    if (cells < 2) throw std::invalid_argument("make_field: need at least 2 cells");
    if (a0 < 0.0 || b0 < 0.0) throw std::invalid_argument("make_field: negative boundary mass");
    DensityField f;
    f.cells = cells;
    f.q.resize(cells);
    for (int j = 0; j < cells; ++j) {
        f.q[j] = p0(f.center(j));
        if (f.q[j] < 0.0) throw std::invalid_argument("make_field: negative initial density");
    }
    f.a = a0;
    f.b = b0;
    const double mass = f.mass();
    if (mass <= 0.0) throw std::invalid_argument("make_field: initial data has no mass");
    const bool off = std::abs(mass - 1.0) > 1e-6;
    if (renormalized) *renormalized = off;
    if (off || mass != 1.0) {
        for (double& v : f.q) v /= mass;
        f.a /= mass;
        f.b /= mass;
    }
    return f;
}

FixationProfile::FixationProfile(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    weight_integral_ = integrate([this](double y) { return weight(y); }, 0.0, 1.0, 1e-12);
}

double FixationProfile::weight(double y) const {
    return std::exp(-(beta_ * y + 0.5 * (alpha_ - beta_) * y * y));
}

double FixationProfile::psi(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return integrate([this](double y) { return weight(y); }, 0.0, x, 1e-12) / weight_integral_;
}

std::vector<double> FixationProfile::psi_values(std::span<const double> xs) const {
    std::vector<double> cum =
        integrate_cumulative([this](double y) { return weight(y); }, 0.0, xs, 1e-12);
    for (double& v : cum) v /= weight_integral_;
    return cum;
}

FixationProfile psi_profile(double alpha, double beta) { return FixationProfile(alpha, beta); }

double fixation_probability_tail(const std::function<double(double)>& tail, double alpha,
                                 double beta) {
    const FixationProfile prof(alpha, beta);
    const double num =
        integrate([&](double y) { return tail(y) * prof.weight(y); }, 0.0, 1.0, 1e-11);
    return num / prof.weight_integral();
}

double fixation_probability(const std::function<double(double)>& p0, double alpha, double beta) {
    const double mass = integrate(p0, 0.0, 1.0, 1e-11);
    if (std::abs(mass - 1.0) > 1e-6)
        throw std::invalid_argument("fixation_probability: p0 must integrate to 1");
    auto tail = [&](double y) { return integrate(p0, y, 1.0, 1e-12); };
    return fixation_probability_tail(tail, alpha, beta);
}

double fixation_probability(const DensityField& p0, double alpha, double beta) {
    if (std::abs(p0.mass() - 1.0) > 1e-6)
        throw std::invalid_argument("fixation_probability: field mass must be 1");
    // tail of the piecewise-constant density plus the Dirac at x=1
    const int m = p0.cells;
    const double dx = p0.dx();
    std::vector<double> suffix(m + 1, 0.0);
    for (int j = m - 1; j >= 0; --j) suffix[j] = suffix[j + 1] + p0.q[j] * dx;
    auto tail = [&](double y) {
        if (y <= 0.0) return p0.b + suffix[0];
        if (y >= 1.0) return p0.b;
        const int j = std::min(int(y * m), m - 1);
        const double frac = (j + 1.0) * dx - y;  // remaining width inside cell j
        return p0.b + suffix[j + 1] + p0.q[j] * frac;
    };
    return fixation_probability_tail(tail, alpha, beta);
}

ForwardSolver::ForwardSolver(int cells, double alpha, double beta, double diffusion)
    : alpha_(alpha), beta_(beta), diffusion_(diffusion) {
    if (cells < 4) throw std::invalid_argument("ForwardSolver: need at least 4 cells");
    if (diffusion < 0.0) throw std::invalid_argument("ForwardSolver: negative diffusion");
    field_.cells = cells;
    field_.q.assign(cells, 0.0);
    diff_coef_.resize(cells);
    for (int j = 0; j < cells; ++j) {
        const double x = field_.center(j);
        diff_coef_[j] = diffusion * x * (1.0 - x);
    }
    face_vel_.resize(cells - 1);
    for (int f = 1; f < cells; ++f) {
        const double x = double(f) / cells;
        face_vel_[f - 1] = x * (1.0 - x) * drift_poly(alpha, beta, x);
    }
    const double dx = field_.dx();
    double dmax = 0.0, vmax = 0.0;
    for (double d : diff_coef_) dmax = std::max(dmax, d);
    for (double v : face_vel_) vmax = std::max(vmax, std::abs(v));
    stable_dt_ = 0.9 / (2.0 * dmax / (dx * dx) + 2.0 * vmax / dx + 1e-300);
    work_w_.resize(cells);
    work_slope_.resize(cells);
    work_flux_.resize(cells + 1);
}

void ForwardSolver::set_initial(const DensityField& field) {
    if (field.cells != field_.cells) throw std::invalid_argument("set_initial: cell count mismatch");
    field_ = field;
    renormalized_ = false;
    check_field();
}

void ForwardSolver::set_initial(const std::function<double(double)>& p0, double a0, double b0) {
    field_ = make_field(field_.cells, p0, a0, b0, &renormalized_);
}

void ForwardSolver::check_field() const {
    if (int(field_.q.size()) != field_.cells)
        throw std::invalid_argument("ForwardSolver: field has wrong cell count");
    if (field_.a < 0.0 || field_.b < 0.0)
        throw std::invalid_argument("ForwardSolver: negative boundary mass");
}

void ForwardSolver::step(double dt) {
    if (dt > stable_dt_ * (1.0 + 1e-12))
        throw std::invalid_argument("ForwardSolver::step: dt exceeds the stability bound");
    const int m = field_.cells;
    const double dx = field_.dx();
    auto& q = field_.q;
    auto& w = work_w_;
    auto& s = work_slope_;
    auto& F = work_flux_;

    for (int j = 0; j < m; ++j) w[j] = diff_coef_[j] * q[j];
    s[0] = s[m - 1] = 0.0;
    for (int j = 1; j < m - 1; ++j) s[j] = minmod(q[j] - q[j - 1], q[j + 1] - q[j]);

    // interior faces: limited upwind advection, central difference of w
    for (int f = 1; f < m; ++f) {
        const double v = face_vel_[f - 1];
        const double up = v >= 0.0 ? q[f - 1] + 0.5 * s[f - 1] : q[f] - 0.5 * s[f];
        F[f] = v * up - (w[f] - w[f - 1]) / dx;
    }
    // boundary faces: one-sided quadratic through w(0)=0 (and w(1)=0); only
    // outflow is admitted, mass at the endpoints never re-enters
    F[0] = std::min(0.0, -(9.0 * w[0] - w[1]) / (3.0 * dx));
    F[m] = std::max(0.0, (9.0 * w[m - 1] - w[m - 2]) / (3.0 * dx));

    const double r = dt / dx;
    for (int j = 0; j < m; ++j) q[j] -= r * (F[j + 1] - F[j]);
    field_.a -= dt * F[0];
    field_.b += dt * F[m];
    field_.t += dt;
}

void ForwardSolver::run(double T) {
    if (T < field_.t) throw std::invalid_argument("ForwardSolver::run: T is in the past");
    while (field_.t < T - 1e-15) {
        const long n = std::max(1L, long(std::ceil((T - field_.t) / stable_dt_)));
        const double dt = (T - field_.t) / double(n);
        for (long i = 0; i < n; ++i) step(dt);
        break;
    }
    field_.t = T;
}

void ForwardSolver::advect(double dt) {
    const int m = field_.cells;
    const double dx = field_.dx();
    auto& q = field_.q;
    auto& s = work_slope_;
    auto& F = work_flux_;
    s[0] = s[m - 1] = 0.0;
    for (int j = 1; j < m - 1; ++j) s[j] = minmod(q[j] - q[j - 1], q[j + 1] - q[j]);
    F[0] = F[m] = 0.0;  // the drift velocity vanishes at the endpoints
    for (int f = 1; f < m; ++f) {
        const double v = face_vel_[f - 1];
        F[f] = v * (v >= 0.0 ? q[f - 1] + 0.5 * s[f - 1] : q[f] - 0.5 * s[f]);
    }
    const double r = dt / dx;
    for (int j = 0; j < m; ++j) q[j] -= r * (F[j + 1] - F[j]);
}

void ForwardSolver::diffuse_be(double dt) {
    const int m = field_.cells;
    const double dx = field_.dx();
    if (dt != be_dt_) {
        // assemble I - dt * Ldiff once per dt; Ldiff is the flux-form diffusion
        // operator including the one-sided boundary fluxes
        be_lower_.assign(m - 1, 0.0);
        be_diag_.assign(m, 0.0);
        be_upper_.assign(m - 1, 0.0);
        const double r = dt / (dx * dx);
        for (int f = 1; f < m; ++f) {
            // face flux -(w_f - w_{f-1})/dx contributes to cells f-1 and f
            be_diag_[f - 1] += r * diff_coef_[f - 1];
            be_upper_[f - 1] -= r * diff_coef_[f];
            be_diag_[f] += r * diff_coef_[f];
            be_lower_[f - 1] -= r * diff_coef_[f - 1];
        }
        be_diag_[0] += r * 3.0 * diff_coef_[0];
        be_upper_[0] += r * -diff_coef_[1] / 3.0;
        be_diag_[m - 1] += r * 3.0 * diff_coef_[m - 1];
        be_lower_[m - 2] += r * -diff_coef_[m - 2] / 3.0;
        for (int j = 0; j < m; ++j) be_diag_[j] += 1.0;
        be_dt_ = dt;
    }
    std::vector<double> qn = solve_tridiagonal(be_lower_, be_diag_, be_upper_, field_.q);
    // boundary fluxes of the implicit step, evaluated at the new state; the
    // same (unclamped) expressions are implied by the matrix, so total mass is
    // conserved to round-off
    const double w0 = diff_coef_[0] * qn[0], w1 = diff_coef_[1] * qn[1];
    const double wm = diff_coef_[m - 1] * qn[m - 1], wm2 = diff_coef_[m - 2] * qn[m - 2];
    const double FL = -(9.0 * w0 - w1) / (3.0 * dx);
    const double FR = (9.0 * wm - wm2) / (3.0 * dx);
    field_.a -= dt * FL;
    field_.b += dt * FR;
    field_.q = std::move(qn);
}

void ForwardSolver::run_split(double T, double cfl) {
    if (T < field_.t) throw std::invalid_argument("ForwardSolver::run_split: T is in the past");
    double vmax = 0.0;
    for (double v : face_vel_) vmax = std::max(vmax, std::abs(v));
    const double dx = field_.dx();
    double dt_adv = vmax > 0.0 ? cfl * dx / vmax : 64.0 * stable_dt_;
    const long n = std::max(1L, long(std::ceil((T - field_.t) / dt_adv)));
    const double dt = (T - field_.t) / double(n);
    for (long i = 0; i < n; ++i) {
        advect(0.5 * dt);
        diffuse_be(dt);
        advect(0.5 * dt);
        field_.t += dt;
    }
    field_.t = T;
}

double ForwardSolver::psi_moment(std::span<const double> psi_at_centers) const {
    if (int(psi_at_centers.size()) != field_.cells)
        throw std::invalid_argument("psi_moment: grid size mismatch");
    double s = 0.0;
    for (int j = 0; j < field_.cells; ++j) s += psi_at_centers[j] * field_.q[j];
    return s * field_.dx() + field_.b;  // psi(0)=0, psi(1)=1
}

DensityField step_complete(const DensityField& field, double alpha, double beta, double dt,
                           double diffusion) {
    ForwardSolver solver(field.cells, alpha, beta, diffusion);
    solver.set_initial(field);
    solver.step(dt);
    return solver.field();
}

double spectral_gap(double alpha, double beta, int cells, double diffusion) {
    if (cells < 64) throw std::invalid_argument("spectral_gap: need at least 64 cells");
    const int m = cells;
    const double dx = 1.0 / m;
    std::vector<double> D(m), vf(m - 1);
    for (int j = 0; j < m; ++j) {
        const double x = (j + 0.5) * dx;
        D[j] = diffusion * x * (1.0 - x);
    }
    for (int f = 1; f < m; ++f) {
        const double x = double(f) / m;
        vf[f - 1] = x * (1.0 - x) * drift_poly(alpha, beta, x);
    }
    // A = -L with centered advective fluxes; tridiagonal
    std::vector<double> lo(m - 1, 0.0), di(m, 0.0), up(m - 1, 0.0);
    const double rd = 1.0 / (dx * dx);
    for (int f = 1; f < m; ++f) {
        const double cadv = vf[f - 1] / (2.0 * dx);
        // flux F_f = vf*(q_{f-1}+q_f)/2 - (w_f - w_{f-1})/dx, A = d(flux)/dx rows
        di[f - 1] += cadv + rd * D[f - 1];
        up[f - 1] += cadv - rd * D[f];
        di[f] += -cadv + rd * D[f];
        lo[f - 1] += -cadv - rd * D[f - 1];
    }
    di[0] += rd * 3.0 * D[0];
    up[0] += -rd * D[1] / 3.0;
    di[m - 1] += rd * 3.0 * D[m - 1];
    lo[m - 2] += -rd * D[m - 2] / 3.0;

    // inverse power iteration for the smallest-magnitude eigenvalue
    std::vector<double> x(m, 1.0);
    double lambda = 0.0, prev = 1e300;
    for (int it = 0; it < 20000; ++it) {
        std::vector<double> y = solve_tridiagonal(lo, di, up, x);
        double norm = 0.0;
        for (double v : y) norm += v * v;
        norm = std::sqrt(norm);
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw std::runtime_error("spectral_gap: inverse iteration broke down");
        for (double& v : y) v /= norm;
        // Rayleigh quotient lambda = <y, A y> / <y, y>
        double num = 0.0;
        for (int j = 0; j < m; ++j) {
            double Ay = di[j] * y[j];
            if (j > 0) Ay += lo[j - 1] * y[j - 1];
            if (j < m - 1) Ay += up[j] * y[j + 1];
            num += y[j] * Ay;
        }
        lambda = num;
        x = std::move(y);
        if (std::abs(lambda - prev) <= 1e-13 * std::max(1.0, std::abs(lambda)) && it >= 10)
            return lambda;
        prev = lambda;
    }
    return lambda;
}

RescaledProblem rescale_strong_selection(double alpha, double beta, double epsilon) {
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw std::invalid_argument("rescale_strong_selection: epsilon must be in (0,1]");
    return {alpha, beta, epsilon, 1.0 / epsilon};
}

}  // namespace moran
