#include "moran/game.hpp"

#include <cmath>

namespace moran {

PayoffMatrix ScaledGame::finite_payoffs(int N) const {
    if (N < 2) throw std::invalid_argument("ScaledGame::finite_payoffs: N must be >= 2");
    if (!(nu > 0.0)) throw std::invalid_argument("ScaledGame::finite_payoffs: nu must be positive");
    const double s = std::pow(double(N), -nu);
    PayoffMatrix p{1.0 + a * s, 1.0 + b * s, 1.0 + c * s, 1.0 + d * s};
    p.validate();
    return p;
}

}  // namespace moran
