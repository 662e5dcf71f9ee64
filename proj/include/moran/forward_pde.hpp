#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace moran {

/// Interior density on a uniform cell-centered grid of (0,1) plus the
/// accumulated boundary masses a (at x=0) and b (at x=1). Total mass
/// a + b + sum(q) dx is conserved by the solver.
struct DensityField {
    int cells = 0;
    std::vector<double> q;
    double a = 0.0;
    double b = 0.0;
    double t = 0.0;

    double dx() const { return 1.0 / cells; }
    double center(int j) const { return (j + 0.5) / cells; }
    std::vector<double> centers() const;
    double interior_mass() const;
    double mass() const { return a + b + interior_mass(); }
    /// L1 / L2 norms of the interior density.
    double norm_l1() const { return interior_mass(); }
    double norm_l2() const;
};

/// Samples p0 at cell centers and normalizes to unit total mass (including
/// point masses a0, b0). Sets `renormalized` when the sampled mass was off by
/// more than 1e-6, as with initial data given up to a constant.
DensityField make_field(int cells, const std::function<double(double)>& p0, double a0 = 0.0,
                        double b0 = 0.0, bool* renormalized = nullptr);

/// The fixation profile psi of the replicator-diffusion equation:
/// psi'' + (beta + (alpha-beta) x) psi' = 0, psi(0)=0, psi(1)=1, so
/// psi(x) = int_0^x w / int_0^1 w with w(y) = exp(-(beta y + (alpha-beta) y^2/2)).
/// <psi, p> is a conserved functional of the forward equation.
class FixationProfile {
  public:
    FixationProfile(double alpha, double beta);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double weight(double y) const;
    double weight_integral() const { return weight_integral_; }
    double psi(double x) const;
    /// psi on an ascending grid, evaluated with shared cumulative quadrature.
    std::vector<double> psi_values(std::span<const double> xs) const;

    /// Smallest eigenvalue of the interior spatial operator, if computed.
    std::optional<double> lambda0;

  private:
    double alpha_, beta_;
    double weight_integral_;
};

FixationProfile psi_profile(double alpha, double beta);

/// pi_1[p0] = int_0^1 [int_y^1 p0 dx] w(y) dy / int_0^1 w dy. The `tail`
/// overload takes T(y) = int_y^1 p0 directly (exact for point masses).
double fixation_probability(const std::function<double(double)>& p0, double alpha, double beta);
double fixation_probability_tail(const std::function<double(double)>& tail, double alpha,
                                 double beta);
double fixation_probability(const DensityField& p0, double alpha, double beta);

/// Conservative finite-volume solver for
///   dp/dt = diffusion * dxx( x(1-x) p ) - dx( x(1-x)(x alpha + (1-x) beta) p ).
/// Fluxes leaving the boundary faces accumulate into the Dirac masses a and b,
/// realizing a(t) = int_0^t q(s,0) ds without evaluating q at the endpoints.
/// Diffusive flux: central differences of x(1-x)q with a one-sided quadratic
/// fit at the boundary faces (x(1-x)q vanishes at the endpoints exactly).
/// Advective flux: upwind on the sign of the face velocity with limited
/// (minmod) second-order reconstruction.
class ForwardSolver {
  public:
    ForwardSolver(int cells, double alpha, double beta, double diffusion = 1.0);

    void set_initial(const DensityField& field);
    void set_initial(const std::function<double(double)>& p0, double a0 = 0.0, double b0 = 0.0);
    bool renormalized() const { return renormalized_; }

    /// Largest dt accepted by step(): explicit stability and positivity bound.
    double stable_dt() const { return stable_dt_; }

    /// One explicit step. Throws if dt exceeds the stability bound.
    void step(double dt);

    /// Explicit stepping up to time T (uniform steps at the stability limit).
    void run(double T);

    /// Long-horizon stepping: Strang split with explicit limited advection at
    /// the advective CFL and backward-Euler diffusion solved tridiagonally.
    /// Same spatial fluxes, unconditionally stable in the stiff diffusion.
    void run_split(double T, double cfl = 0.4);

    const DensityField& field() const { return field_; }
    DensityField& field() { return field_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double diffusion() const { return diffusion_; }

    /// <psi, p> including the boundary masses: dx sum psi(x_j) q_j + a psi(0) + b psi(1).
    double psi_moment(std::span<const double> psi_at_centers) const;

  private:
    void advect(double dt);
    void diffuse_be(double dt);
    void check_field() const;

    DensityField field_;
    double alpha_, beta_, diffusion_;
    double stable_dt_ = 0.0;
    bool renormalized_ = false;
    std::vector<double> diff_coef_;   // diffusion * x(1-x) at centers
    std::vector<double> face_vel_;    // drift velocity at interior faces
    std::vector<double> work_w_, work_slope_, work_flux_;
    std::vector<double> be_lower_, be_diag_, be_upper_;  // cached BE matrix
    double be_dt_ = -1.0;
};

/// One explicit step as a value-level operation.
DensityField step_complete(const DensityField& field, double alpha, double beta, double dt,
                           double diffusion = 1.0);

/// Smallest eigenvalue of the discretized interior operator
///   q -> -[ diffusion * dxx(x(1-x)q) - dx(x(1-x)(x alpha + (1-x) beta) q) ]
/// by inverse power iteration with tridiagonal solves (centered advective
/// fluxes, same boundary flux treatment as the solver).
double spectral_gap(double alpha, double beta, int cells, double diffusion = 1.0);

/// Strong-selection rescaling: (alpha', beta') = eps*(alpha, beta) with
/// t' = t/eps turns the complete equation into
///   dq/dt = eps * dxx(x(1-x)q) - dx(x(1-x)(x alpha + (1-x) beta) q),
/// i.e. the original drift with diffusion coefficient eps. time_dilation is
/// the factor 1/eps relating t' to the unscaled time.
struct RescaledProblem {
    double alpha;
    double beta;
    double diffusion;
    double time_dilation;
};
RescaledProblem rescale_strong_selection(double alpha, double beta, double epsilon);

}  // namespace moran
