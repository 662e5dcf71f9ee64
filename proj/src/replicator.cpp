#include "moran/replicator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "moran/ode.hpp"
#include "moran/quadrature.hpp"

namespace moran {

double replicator_field(double x, double alpha, double beta) {
    return x * (1.0 - x) * (beta + (alpha - beta) * x);
}

double replicator_field_derivative(double x, double alpha, double beta) {
    return (1.0 - 2.0 * x) * (beta + (alpha - beta) * x) + x * (1.0 - x) * (alpha - beta);
}

ReplicatorFlow make_replicator_flow(double alpha, double beta) {
    ReplicatorFlow f{alpha, beta, std::nullopt};
    if (beta != alpha) {
        const double xs = beta / (beta - alpha);
        if (xs > 0.0 && xs < 1.0) f.x_star = xs;
    }
    return f;
}

double flow(double x0, double t, double alpha, double beta) {
    if (x0 < 0.0 || x0 > 1.0) throw std::invalid_argument("flow: x0 must be in [0,1]");
    if (x0 == 0.0 || x0 == 1.0 || t == 0.0) return x0;
    auto rhs = [&](double, const std::array<double, 1>& y) {
        return std::array<double, 1>{replicator_field(y[0], alpha, beta)};
    };
    const auto y = integrate_ode<1>(rhs, {x0}, 0.0, t);
    return std::clamp(y[0], 0.0, 1.0);
}

BackwardPoint backward_flow_jacobian(double x, double t, double alpha, double beta) {
    auto rhs = [&](double, const std::array<double, 2>& y) {
        return std::array<double, 2>{-replicator_field(y[0], alpha, beta),
                                     -replicator_field_derivative(y[0], alpha, beta) * y[1]};
    };
    const auto y = integrate_ode<2>(rhs, {x, 1.0}, 0.0, t);
    return {std::clamp(y[0], 0.0, 1.0), y[1]};
}

double nodiffusion_value(const HyperbolicInit& init, double t, double x, double alpha,
                         double beta) {
    if (t == 0.0) return init.q0(x);
    const BackwardPoint b = backward_flow_jacobian(x, t, alpha, beta);
    return init.q0(b.y) * b.jacobian;
}

DensitySnapshot solve_nodiffusion(const HyperbolicInit& init, double t, std::span<const double> xs,
                                  double alpha, double beta) {
    DensitySnapshot snap;
    snap.x.assign(xs.begin(), xs.end());
    snap.p.resize(xs.size());
    snap.a0 = init.a0;
    snap.b0 = init.b0;
    snap.t = t;
    for (std::size_t i = 0; i < xs.size(); ++i)
        snap.p[i] = nodiffusion_value(init, t, xs[i], alpha, beta);
    return snap;
}

double nodiffusion_value_ratio_form(const HyperbolicInit& init, double t, double x, double alpha,
                                    double beta) {
    const double y = flow(x, -t, alpha, beta);
    const double num = (beta + (alpha - beta) * y) * y * (1.0 - y);
    const double den = (beta + (alpha - beta) * x) * x * (1.0 - x);
    if (den == 0.0)
        throw std::invalid_argument("nodiffusion_value_ratio_form: indeterminate at a fixed point");
    return init.q0(y) * std::abs(num / den);
}

NoDiffusionFV::NoDiffusionFV(int cells, double alpha, double beta)
    : cells_(cells), alpha_(alpha), beta_(beta) {
    if (cells < 4) throw std::invalid_argument("NoDiffusionFV: need at least 4 cells");
    q_.assign(cells, 0.0);
    face_vel_.resize(cells - 1);
    for (int f = 1; f < cells; ++f) {
        const double x = double(f) / cells;
        face_vel_[f - 1] = replicator_field(x, alpha, beta);
    }
    flux_.resize(cells + 1);
}

void NoDiffusionFV::set_initial(const std::function<double(double)>& q0) {
    double mass = 0.0;
    for (int j = 0; j < cells_; ++j) {
        q_[j] = q0((j + 0.5) / cells_);
        mass += q_[j];
    }
    mass /= cells_;
    if (mass <= 0.0) throw std::invalid_argument("NoDiffusionFV: initial data has no mass");
    for (double& v : q_) v /= mass;
}

void NoDiffusionFV::run(double T) {
    const double dx = 1.0 / cells_;
    double vmax = 0.0;
    for (double v : face_vel_) vmax = std::max(vmax, std::abs(v));
    const double dt_max = vmax > 0.0 ? 0.45 * dx / vmax : T;
    while (t_ < T - 1e-15) {
        const double dt = std::min(dt_max, T - t_);
        flux_[0] = flux_[cells_] = 0.0;
        for (int f = 1; f < cells_; ++f) {
            const double v = face_vel_[f - 1];
            flux_[f] = v * (v >= 0.0 ? q_[f - 1] : q_[f]);
        }
        const double r = dt / dx;
        for (int j = 0; j < cells_; ++j) q_[j] -= r * (flux_[j + 1] - flux_[j]);
        t_ += dt;
    }
    t_ = T;
}

std::vector<double> NoDiffusionFV::centers() const {
    std::vector<double> xs(cells_);
    for (int j = 0; j < cells_; ++j) xs[j] = (j + 0.5) / cells_;
    return xs;
}

double NoDiffusionFV::mass() const {
    double s = 0.0;
    for (double v : q_) s += v;
    return s / cells_;
}

double lagrangian_weight(double x, double alpha, double beta) {
    return replicator_field(x, alpha, beta);
}

std::vector<double> lagrangian_density(std::span<const double> xs, std::span<const double> q,
                                       double alpha, double beta) {
    if (xs.size() != q.size()) throw std::invalid_argument("lagrangian_density: size mismatch");
    std::vector<double> u(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) u[i] = lagrangian_weight(xs[i], alpha, beta) * q[i];
    return u;
}

namespace {

void check_hawk_dove_phi(double alpha, double beta) {
    const double p = (alpha - beta) / (alpha * beta);
    if (!(-1.0 / alpha > 0.0) || !(1.0 / beta > 0.0) || !(p > 0.0))
        throw std::invalid_argument(
            "lyapunov: requires Hawk-Dove parameters (-1/alpha, 1/beta, (alpha-beta)/(alpha beta) "
            "all positive)");
}

}  // namespace

double lyapunov_phi(double x, double alpha, double beta) {
    check_hawk_dove_phi(alpha, beta);
    if (x <= 0.0 || x >= 1.0) return std::numeric_limits<double>::infinity();
    const double p = (alpha - beta) / (alpha * beta);
    // |.|: the paper's expression is read as real-valued on both sides of x*
    return std::pow(std::abs(beta + (alpha - beta) * x), p) *
           std::pow(x, -1.0 / beta) * std::pow(1.0 - x, 1.0 / alpha);
}

double lyapunov_moment(std::span<const double> xs, std::span<const double> p, double alpha,
                       double beta) {
    check_hawk_dove_phi(alpha, beta);
    if (xs.size() != p.size() || xs.size() < 2)
        throw std::invalid_argument("lyapunov_moment: bad grid");
    const double dx = xs[1] - xs[0];
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) s += p[i] * lyapunov_phi(xs[i], alpha, beta);
    return s * dx;
}

double lyapunov_moment(const std::function<double(double)>& p, double alpha, double beta,
                       double abs_tol) {
    check_hawk_dove_phi(alpha, beta);
    return integrate([&](double x) { return p(x) * lyapunov_phi(x, alpha, beta); }, 0.0, 1.0,
                     abs_tol, 48);
}

}  // namespace moran
