#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace moran {

/// Right-hand side of the replicator ODE: V(x) = x(1-x)(x(alpha-beta) + beta),
/// written with the drift polynomial beta + (alpha-beta)x.
double replicator_field(double x, double alpha, double beta);
double replicator_field_derivative(double x, double alpha, double beta);

/// Replicator flow parameters; x_star = beta/(beta-alpha) when it lies in (0,1).
struct ReplicatorFlow {
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<double> x_star;
};
ReplicatorFlow make_replicator_flow(double alpha, double beta);

/// Flow map Phi_t(x0) of the replicator ODE; t may be negative (backward flow
/// integrates the negated field). Adaptive RK with tolerances 1e-10/1e-12.
double flow(double x0, double t, double alpha, double beta);

/// Backward flow together with its spatial derivative:
/// y = Phi_{-t}(x), J = d/dx Phi_{-t}(x), from the variational equation.
/// J is the smooth value of the Jacobian factor in the characteristics
/// formula, valid at the fixed points where the raw ratio degenerates to 0/0.
struct BackwardPoint {
    double y;
    double jacobian;
};
BackwardPoint backward_flow_jacobian(double x, double t, double alpha, double beta);

/// Initial data for the no-diffusion equation: interior density plus point
/// masses at the endpoints.
struct HyperbolicInit {
    std::function<double(double)> q0;
    double a0 = 0.0;
    double b0 = 0.0;
};

/// Density snapshot at time t on an evaluation grid.
struct DensitySnapshot {
    std::vector<double> x;
    std::vector<double> p;
    double a0 = 0.0;
    double b0 = 0.0;
    double t = 0.0;
};

/// Solution of dp/dt = -dx( x(1-x)(x alpha + (1-x) beta) p ) by the
/// characteristics formula p(t,x) = q0(Phi_{-t}(x)) * d/dx Phi_{-t}(x); the
/// endpoint masses are transported unchanged.
DensitySnapshot solve_nodiffusion(const HyperbolicInit& init, double t, std::span<const double> xs,
                                  double alpha, double beta);
double nodiffusion_value(const HyperbolicInit& init, double t, double x, double alpha, double beta);

/// The raw ratio form of the characteristics formula (Jacobian as
/// V(Phi_{-t}(x))/V(x)); indeterminate at x in {0, 1, x*}. Used to cross-check
/// the variational route away from those points.
double nodiffusion_value_ratio_form(const HyperbolicInit& init, double t, double x, double alpha,
                                    double beta);

/// First-order upwind finite-volume solver for the same equation; independent
/// cross-check of the characteristics representation.
class NoDiffusionFV {
  public:
    NoDiffusionFV(int cells, double alpha, double beta);
    void set_initial(const std::function<double(double)>& q0);
    void run(double T);
    const std::vector<double>& q() const { return q_; }
    std::vector<double> centers() const;
    double t() const { return t_; }
    double mass() const;

  private:
    int cells_;
    double alpha_, beta_, t_ = 0.0;
    std::vector<double> q_, face_vel_, flux_;
};

/// Lagrangian density u(t,x) = x(1-x)(beta + (alpha-beta)x) q(t,x); u is
/// exactly advected by the replicator flow.
std::vector<double> lagrangian_density(std::span<const double> xs, std::span<const double> q,
                                       double alpha, double beta);
double lagrangian_weight(double x, double alpha, double beta);

/// Lyapunov function of the Hawk-Dove no-diffusion dynamics:
/// phi(x) = |beta + (alpha-beta) x|^((alpha-beta)/(alpha beta)) * x^(-1/beta) * (1-x)^(1/alpha),
/// nonnegative with a unique zero at x*; V phi' = -phi. Requires alpha < 0 < beta.
double lyapunov_phi(double x, double alpha, double beta);

/// int p(t,x) phi(x) dx for a grid snapshot (midpoint quadrature) or an
/// arbitrary density callable (adaptive quadrature). Decays exactly as e^{-t}
/// along solutions of the no-diffusion equation.
double lyapunov_moment(std::span<const double> xs, std::span<const double> p, double alpha,
                       double beta);
double lyapunov_moment(const std::function<double(double)>& p, double alpha, double beta,
                       double abs_tol = 1e-10);

}  // namespace moran
