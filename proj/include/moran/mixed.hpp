#pragma once

#include <functional>

#include "moran/game.hpp"

namespace moran {

/// Game between mixed strategists E_theta1 and E_theta2, where E_theta plays
/// pure strategy I with probability theta. Reduced payoffs are the bilinear
/// combinations of the base game; the continuum drift of the reduced game is
/// x alpha_eff + (1-x) beta_eff with
///   beta_eff  = (theta1-theta2)(theta2 alpha + (1-theta2) beta),
///   alpha_eff = beta_eff + (theta1-theta2)^2 (alpha - beta).
struct MixedGame {
    double theta1 = 1.0;
    double theta2 = 0.0;
    ScaledGame base;

    ScaledGame reduced;  // reduced scaled payoffs (same bilinear formulas)
    double alpha_eff = 0.0;
    double beta_eff = 0.0;
};

MixedGame make_mixed_game(const ScaledGame& base, double theta1, double theta2);

/// The bilinear payoff reduction of the finite-N matrix.
PayoffMatrix reduce_payoffs(const PayoffMatrix& base, double theta1, double theta2);

/// Mixed fixation weight F_(theta1,theta2)(y).
double mixed_weight(const MixedGame& game, double y);

/// pi_1[p0] of the mixed game: int p0(x) [int_0^x F] dx / int_0^1 F, computed
/// by quadrature of the weight directly. Coincides with the pure-game
/// fixation probability at (alpha_eff, beta_eff).
double mixed_fixation(const std::function<double(double)>& p0, const MixedGame& game);

/// E_theta2 dominates E_theta1: the replicator flow carries theta1 toward
/// theta2, i.e. the field at theta1 points at theta2 and no interior fixed
/// point lies strictly between them. Throws for theta1 == theta2 (mutually
/// neutral strategists).
bool dominates(double theta1, double theta2, double alpha, double beta);

/// The defining criterion: fixation probability of the theta1-type below the
/// neutral value for every delta_x initial condition on a uniform interior
/// grid (psi_eff(x) < x strictly). Used to cross-check the flow criterion.
bool dominates_by_fixation(double theta1, double theta2, double alpha, double beta,
                           int grid_points = 21);

}  // namespace moran
