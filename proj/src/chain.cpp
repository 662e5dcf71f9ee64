#include "moran/chain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace moran {

namespace {

// P(reproducer is type I) given survivor counts i (type I) and j (type II),
// i + j = N - 1. With a lone survivor reproduction is deterministic; the
// N = 2 corner has no opponents, so fitness is the neutral constant.
double repro_prob_I(double i, double j, int N, const PayoffMatrix& g) {
    if (i <= 0.0) return 0.0;
    if (j <= 0.0) return 1.0;
    if (N == 2) return i > 0.0 ? 1.0 : 0.0;
    const double fI = ((i - 1.0) * g.A + j * g.B) / double(N - 2);
    const double fII = (i * g.C + (j - 1.0) * g.D) / double(N - 2);
    return i * fI / (i * fI + j * fII);
}

}  // namespace

KernelPoint kernel_probabilities(const PayoffMatrix& game, int N, double n, KernelVariant variant) {
    if (N < 2) throw std::invalid_argument("kernel_probabilities: N must be >= 2");
    game.validate();
    KernelPoint out;
    if (variant == KernelVariant::DeathFirst) {
        // victim II with prob (N-n)/N, then reproducer among (n, N-n-1) survivors
        if (n < N) out.cplus = (N - n) / N * repro_prob_I(n, double(N) - n - 1.0, N, game);
        // victim I with prob n/N, then reproducer among (n-1, N-n) survivors
        if (n > 0) out.cminus = n / N * (1.0 - repro_prob_I(n - 1.0, double(N) - n, N, game));
    } else {
        // reproducer among all N proportional to fitness (average payoff against
        // the other N-1), victim uniform over all N afterwards
        const double i = n, j = double(N) - n;
        double pI;
        if (i <= 0.0)
            pI = 0.0;
        else if (j <= 0.0)
            pI = 1.0;
        else {
            const double fI = ((i - 1.0) * game.A + j * game.B) / double(N - 1);
            const double fII = (i * game.C + (j - 1.0) * game.D) / double(N - 1);
            pI = i * fI / (i * fI + j * fII);
        }
        out.cplus = pI * (double(N) - n) / N;
        out.cminus = (1.0 - pI) * n / N;
    }
    return out;
}

TransitionKernel build_transition_kernel(const PayoffMatrix& game, int N, KernelVariant variant) {
    if (N < 2) throw std::invalid_argument("build_transition_kernel: N must be >= 2");
    game.validate();
    TransitionKernel k;
    k.N = N;
    k.cminus.resize(N + 1);
    k.czero.resize(N + 1);
    k.cplus.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        const KernelPoint p = kernel_probabilities(game, N, double(n), variant);
        k.cminus[n] = p.cminus;
        k.cplus[n] = p.cplus;
        k.czero[n] = 1.0 - p.cminus - p.cplus;
    }
    return k;
}

void evolve_in_place(ChainState& state, const TransitionKernel& kernel, long steps) {
    if (state.N != kernel.N) throw std::invalid_argument("evolve: state/kernel size mismatch");
    if (state.P.size() != std::size_t(state.N) + 1)
        throw std::invalid_argument("evolve: state vector has wrong length");
    const int N = state.N;
    std::vector<double> next(N + 1);
    for (long s = 0; s < steps; ++s) {
        for (int n = 0; n <= N; ++n) {
            double v = kernel.czero[n] * state.P[n];
            if (n > 0) v += kernel.cplus[n - 1] * state.P[n - 1];
            if (n < N) v += kernel.cminus[n + 1] * state.P[n + 1];
            next[n] = v;
        }
        state.P.swap(next);
    }
    state.t += steps;
}

ChainState evolve(const ChainState& state, const TransitionKernel& kernel, long steps) {
    ChainState out = state;
    evolve_in_place(out, kernel, steps);
    return out;
}

FixationVector fixation_vector(const TransitionKernel& kernel) {
    const int N = kernel.N;
    if (kernel.cplus[0] != 0.0 || kernel.cminus[0] != 0.0 || kernel.cplus[N] != 0.0 ||
        kernel.cminus[N] != 0.0)
        throw std::invalid_argument("fixation_vector: kernel endpoints must be absorbing");
    for (int n = 1; n < N; ++n)
        if (kernel.cplus[n] <= 0.0)
            throw std::invalid_argument("fixation_vector: cplus vanishes at an interior state");

    // S(n) = sum_{j<n} prod_{k<=j} (cminus_k / cplus_k); F = S(n)/S(N).
    // Accumulated in log space so products of extreme ratios neither overflow
    // nor underflow.
    std::vector<double> logprod(N);  // logprod[j] = log prod_{k=1..j} ratio_k, j = 0..N-1
    logprod[0] = 0.0;
    for (int j = 1; j < N; ++j) {
        const double r = kernel.cminus[j] / kernel.cplus[j];
        logprod[j] = logprod[j - 1] + std::log(r);
    }
    const double lmax = *std::max_element(logprod.begin(), logprod.end());
    FixationVector out;
    out.F.resize(N + 1);
    out.F[0] = 0.0;
    double acc = 0.0;
    for (int j = 0; j < N; ++j) {
        acc += std::exp(logprod[j] - lmax);
        out.F[j + 1] = acc;
    }
    const double total = out.F[N];
    for (int n = 1; n <= N; ++n) out.F[n] /= total;
    return out;
}

AbsorptionSplit absorb(const ChainState& state, const TransitionKernel& kernel) {
    if (state.N != kernel.N) throw std::invalid_argument("absorb: state/kernel size mismatch");
    const FixationVector F = fixation_vector(kernel);
    double pi1 = 0.0;
    for (int n = 0; n <= state.N; ++n) pi1 += F.F[n] * state.P[n];
    return {1.0 - pi1, pi1};
}

double interior_mass(const ChainState& state) {
    double m = 0.0;
    for (int n = 1; n < state.N; ++n) m += state.P[n];
    return m;
}

IteratedAbsorption absorb_by_iteration(const ChainState& state, const TransitionKernel& kernel,
                                       double interior_tol) {
    ChainState s = state;
    const long cap = 50L * long(s.N) * long(s.N);
    const long chunk = std::max(1L, long(s.N));
    IteratedAbsorption out;
    while (out.steps < cap && interior_mass(s) >= interior_tol) {
        const long take = std::min(chunk, cap - out.steps);
        evolve_in_place(s, kernel, take);
        out.steps += take;
    }
    out.converged = interior_mass(s) < interior_tol;
    out.pi0 = s.P[0];
    out.pi1 = s.P[s.N];
    return out;
}

}  // namespace moran
