#include "primelab/bump.hpp"

#include <cmath>
#include <stdexcept>

namespace primelab {

namespace {
// g(s) = exp(-1/s) for s > 0, extended by 0; all derivatives vanish at 0,
// which is what makes the glued transition smooth.
double g(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
} // namespace

Bump::Bump(double r1, double r2) : plateau(r1), support(r2) {
    if (!(r1 > 0.0) || !(r2 > r1)) throw std::invalid_argument("Bump: need 0 < plateau < support");
}

double Bump::operator()(double t) const {
    t = std::fabs(t);
    if (t <= plateau) return 1.0;
    if (t >= support) return 0.0;
    double u = (support - t) / (support - plateau);
    double v = (t - plateau) / (support - plateau);
    double gu = g(u), gv = g(v);
    return gu / (gu + gv);
}

} // namespace primelab
