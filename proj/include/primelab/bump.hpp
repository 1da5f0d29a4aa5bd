#pragma once

namespace primelab {

// Smooth even bump with a flat plateau: value 1 on |t| <= plateau, 0 outside
// |t| >= support, and the canonical exp(-1/s) transition in between. Scaled
// copies localize to arcs of prescribed widths.
struct Bump {
    double plateau = 0.25;
    double support = 0.5;

    Bump() = default;
    Bump(double r1, double r2);

    double operator()(double t) const;

    // value of the copy scaled by `scale`: b(scale * t)
    double scaled(double scale, double t) const { return (*this)(scale * t); }

    double plateau_radius(double scale) const { return plateau / scale; }
    double support_radius(double scale) const { return support / scale; }
};

} // namespace primelab
