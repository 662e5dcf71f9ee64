#pragma once

#include <span>
#include <vector>

#include "moran/game.hpp"

namespace moran {

enum class KernelVariant {
    DeathFirst,  // victim first, survivors play, reproducer proportional to fitness
    BirthFirst,  // reproducer first among all N, victim uniform over N
};

/// One-step transition probabilities of the Moran chain, indexed by the number
/// n = 0..N of type-I individuals. Columns are stochastic and the endpoints
/// are absorbing: cplus(N) = cminus(0) = 0, czero(0) = czero(N) = 1.
struct TransitionKernel {
    int N = 0;
    std::vector<double> cminus;  // n -> n-1
    std::vector<double> czero;   // n -> n
    std::vector<double> cplus;   // n -> n+1
};

/// Probability vector over n = 0..N at integer time t (number of steps taken).
struct ChainState {
    int N = 0;
    std::vector<double> P;
    long t = 0;
};

/// Fixation probabilities F(n) = P(absorb at N | start at n); F(0)=0, F(N)=1,
/// monotone, and invariant under the transpose of the transition matrix.
struct FixationVector {
    std::vector<double> F;
};

struct AbsorptionSplit {
    double pi0 = 0.0;
    double pi1 = 0.0;
};

/// Transition probabilities (cminus, cplus) evaluated at a real-valued state n.
/// The closed-form kernel expressions are rational in n, so this is the natural
/// smooth interpolant used by the 1/N expansion machinery.
struct KernelPoint {
    double cminus = 0.0;
    double cplus = 0.0;
};
KernelPoint kernel_probabilities(const PayoffMatrix& game, int N, double n,
                                 KernelVariant variant = KernelVariant::DeathFirst);

/// Builds the exact finite-N kernel. Death-first dynamics: the eliminated
/// individual is uniform over N; each of the N-1 survivors has fitness equal
/// to its average payoff against the other N-2 survivors (self-play excluded,
/// fitness 1 when that set is empty); the reproducer is drawn among survivors
/// proportional to fitness.
TransitionKernel build_transition_kernel(const PayoffMatrix& game, int N,
                                         KernelVariant variant = KernelVariant::DeathFirst);

/// Applies the tridiagonal update `steps` times. Preserves total mass and the
/// fixation inner product <F,P>.
ChainState evolve(const ChainState& state, const TransitionKernel& kernel, long steps);
void evolve_in_place(ChainState& state, const TransitionKernel& kernel, long steps);

/// Stationary fixation probabilities from the harmonic recurrence
/// cplus(n)(F(n+1)-F(n)) = cminus(n)(F(n)-F(n-1)), computed by the product-sum
/// formula with log-space accumulation. Requires cplus > 0 at interior states.
FixationVector fixation_vector(const TransitionKernel& kernel);

/// Absorption split: pi1 = <F, P>, pi0 = 1 - pi1.
AbsorptionSplit absorb(const ChainState& state, const TransitionKernel& kernel);

/// Test oracle companion to absorb(): iterates evolve until the interior mass
/// drops below `interior_tol` or 50*N^2 steps have been taken, and reads the
/// endpoint masses. For strongly selected Hawk-Dove games the cap can trigger
/// first; the returned `converged` flag says which happened.
struct IteratedAbsorption {
    double pi0 = 0.0;
    double pi1 = 0.0;
    long steps = 0;
    bool converged = false;
};
IteratedAbsorption absorb_by_iteration(const ChainState& state, const TransitionKernel& kernel,
                                       double interior_tol = 1e-12);

double interior_mass(const ChainState& state);

}  // namespace moran
