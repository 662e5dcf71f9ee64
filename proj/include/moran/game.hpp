#pragma once

#include <stdexcept>

namespace moran {

/// 2x2 payoff matrix of the finite-N game (row player I/II vs column I/II).
/// All entries must be strictly positive so fitness is a valid selection weight.
struct PayoffMatrix {
    double A = 1.0;
    double B = 1.0;
    double C = 1.0;
    double D = 1.0;

    void validate() const {
        if (!(A > 0.0 && B > 0.0 && C > 0.0 && D > 0.0))
            throw std::invalid_argument("PayoffMatrix: all entries must be strictly positive");
    }

    /// Hawk-Dove structure: C > A > 0 and B > D > 0 (unique stable interior equilibrium).
    bool hawk_dove() const { return C > A && A > 0.0 && B > D && D > 0.0; }

    bool neutral() const { return A == B && B == C && C == D; }
};

/// Scaled payoffs (a,b,c,d) with exponent nu: finite-N payoffs are 1 + a/N^nu etc.
/// Drift parameters alpha = a-c, beta = b-d govern selection in the continuum limits.
struct ScaledGame {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double nu = 1.0;

    double alpha() const { return a - c; }
    double beta() const { return b - d; }

    /// Finite-N payoff matrix 1 + (a,b,c,d)/N^nu. Throws if any entry is nonpositive
    /// for this N (the scaling only makes sense once payoffs are positive).
    PayoffMatrix finite_payoffs(int N) const;

    /// Hawk-Dove in the scaled sense: alpha < 0 < beta.
    bool hawk_dove_limit() const { return alpha() < 0.0 && beta() > 0.0; }
};

}  // namespace moran
