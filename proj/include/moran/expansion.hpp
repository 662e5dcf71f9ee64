#pragma once

#include <array>
#include <span>
#include <vector>

#include "moran/chain.hpp"
#include "moran/game.hpp"

namespace moran {

/// 1/N expansion of the kernel sampled on an x grid.
///
/// Stage one expands each shifted probability c_+(xM-1), c_0(xM), c_-(xM+1)
/// in powers of 1/M at fixed payoffs (Richardson fit over the N list), which
/// matches the definition of the coefficients c_*^(i). Stage two rescales the
/// payoff-dependent combinations by N^nu and extrapolates in N^-nu, isolating
/// the scaling limits of the drift difference and the first-order sum.
/// Individual coefficients are kernel-variant dependent; only the combinations
/// are model-independent.
struct KernelExpansion {
    std::vector<double> x;

    // c_*^(i)(x) at the reference payoffs (largest N in the list), paper
    // convention c_* = c^(0) + c^(1)/N + c^(2)/(2 N^2) + O(1/N^3).
    // Index 0: c_+, 1: c_0, 2: c_-.
    std::array<std::vector<double>, 3> order0;
    std::array<std::vector<double>, 3> order1;
    std::array<std::vector<double>, 3> order2;
    double fit_residual = 0.0;  // max over grid/stars of the stage-one fit residual

    // lim N^nu (c_+^(0) - c_-^(0)): the drift x(1-x)(x alpha + (1-x) beta).
    std::vector<double> drift;
    double drift_residual = 0.0;

    // lim N^nu (c_+^(1) + c_0^(1) + c_-^(1)): equals minus the x-derivative of
    // the drift polynomial.
    std::vector<double> first_order_sum;
    double first_order_sum_residual = 0.0;
};

/// Default expansion grid: 101 uniform points on [0.05, 0.95]. The margin keeps
/// the shifted samples x*N -/+ 1 inside the valid state range for every N in
/// the default list.
std::vector<double> default_expansion_grid();

KernelExpansion expand_kernel(const ScaledGame& game, std::span<const double> x_grid,
                              std::span<const int> N_list,
                              KernelVariant variant = KernelVariant::DeathFirst);

inline KernelExpansion expand_kernel(const ScaledGame& game,
                                     KernelVariant variant = KernelVariant::DeathFirst) {
    const std::vector<double> xs = default_expansion_grid();
    const int ns[] = {64, 128, 256, 512};
    return expand_kernel(game, xs, ns, variant);
}

/// Drift coefficient of the thermodynamical limit: x(1-x)(x alpha + (1-x) beta).
double drift_limit(double alpha, double beta, double x);
double drift_limit(const ScaledGame& game, double x);

enum class Balance {
    Degenerate,      // all terms vanish in the limit
    DriftOnly,       // hyperbolic equation, nu in (0,1)
    DriftDiffusion,  // replicator-diffusion equation, nu = 1
};

/// Classifies the time-step/payoff scaling balance: the non-trivial balances
/// occur at dt = N^-(nu+1), with diffusion surviving only at nu = 1.
Balance classify_balance(double nu, double dt_exponent);

}  // namespace moran
