#include "moran/mixed.hpp"

#include <cmath>
#include <stdexcept>

#include "moran/forward_pde.hpp"
#include "moran/quadrature.hpp"
#include "moran/replicator.hpp"

namespace moran {

namespace {

void check_theta(double t1, double t2) {
    if (t1 < 0.0 || t1 > 1.0 || t2 < 0.0 || t2 > 1.0)
        throw std::invalid_argument("mixed strategies: theta must lie in [0,1]");
}

double reduce_one(double A, double B, double C, double D, double p, double q) {
    // row strategist plays I with probability p, column with probability q
    return p * q * A + p * (1.0 - q) * B + (1.0 - p) * q * C + (1.0 - p) * (1.0 - q) * D;
}

}  // namespace

PayoffMatrix reduce_payoffs(const PayoffMatrix& base, double theta1, double theta2) {
    check_theta(theta1, theta2);
    base.validate();
    PayoffMatrix r;
    r.A = reduce_one(base.A, base.B, base.C, base.D, theta1, theta1);
    r.B = reduce_one(base.A, base.B, base.C, base.D, theta1, theta2);
    r.C = reduce_one(base.A, base.B, base.C, base.D, theta2, theta1);
    r.D = reduce_one(base.A, base.B, base.C, base.D, theta2, theta2);
    return r;
}

MixedGame make_mixed_game(const ScaledGame& base, double theta1, double theta2) {
    check_theta(theta1, theta2);
    MixedGame g;
    g.theta1 = theta1;
    g.theta2 = theta2;
    g.base = base;
    g.reduced.a = reduce_one(base.a, base.b, base.c, base.d, theta1, theta1);
    g.reduced.b = reduce_one(base.a, base.b, base.c, base.d, theta1, theta2);
    g.reduced.c = reduce_one(base.a, base.b, base.c, base.d, theta2, theta1);
    g.reduced.d = reduce_one(base.a, base.b, base.c, base.d, theta2, theta2);
    g.reduced.nu = base.nu;
    const double dt = theta1 - theta2;
    g.beta_eff = dt * (theta2 * base.alpha() + (1.0 - theta2) * base.beta());
    g.alpha_eff = g.beta_eff + dt * dt * (base.alpha() - base.beta());
    return g;
}

double mixed_weight(const MixedGame& game, double y) {
    const double dt = game.theta1 - game.theta2;
    const double am = game.base.alpha() - game.base.beta();
    const double drift0 = game.theta2 * game.base.alpha() + (1.0 - game.theta2) * game.base.beta();
    return std::exp(-(y * y * dt * dt * am * 0.5 + y * dt * drift0));
}

double mixed_fixation(const std::function<double(double)>& p0, const MixedGame& game) {
    const double mass = integrate(p0, 0.0, 1.0, 1e-11);
    if (std::abs(mass - 1.0) > 1e-6)
        throw std::invalid_argument("mixed_fixation: p0 must integrate to 1");
    const double den = integrate([&](double y) { return mixed_weight(game, y); }, 0.0, 1.0, 1e-12);
    auto cumulative = [&](double x) {
        return integrate([&](double y) { return mixed_weight(game, y); }, 0.0, x, 1e-12);
    };
    const double num = integrate([&](double x) { return p0(x) * cumulative(x); }, 0.0, 1.0, 1e-11);
    return num / den;
}

bool dominates(double theta1, double theta2, double alpha, double beta) {
    check_theta(theta1, theta2);
    if (theta1 == theta2)
        throw std::invalid_argument("dominates: equal strategists are mutually neutral");
    const double v = replicator_field(theta1, alpha, beta);
    if (v == 0.0) return false;
    if ((theta2 - theta1) * v <= 0.0) return false;
    // no interior fixed point strictly between theta1 and theta2
    const ReplicatorFlow fl = make_replicator_flow(alpha, beta);
    if (fl.x_star) {
        const double lo = std::min(theta1, theta2), hi = std::max(theta1, theta2);
        if (*fl.x_star > lo && *fl.x_star < hi) return false;
    }
    return true;
}

bool dominates_by_fixation(double theta1, double theta2, double alpha, double beta,
                           int grid_points) {
    check_theta(theta1, theta2);
    if (theta1 == theta2)
        throw std::invalid_argument("dominates_by_fixation: equal strategists are mutually neutral");
    ScaledGame base;  // only the drift parameters enter the continuum criterion
    base.a = alpha;
    base.c = 0.0;
    base.b = beta;
    base.d = 0.0;
    const MixedGame g = make_mixed_game(base, theta1, theta2);
    const FixationProfile prof(g.alpha_eff, g.beta_eff);
    for (int k = 1; k <= grid_points; ++k) {
        const double x = double(k) / (grid_points + 1);
        if (!(prof.psi(x) < x)) return false;
    }
    return true;
}

}  // namespace moran
