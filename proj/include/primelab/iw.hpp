#pragma once

#include "primelab/bump.hpp"
#include "primelab/numtheory.hpp"

#include <cstdint>
#include <vector>

namespace primelab {

// Structured rational frequency set: the minimal admissible choice,
// all reduced a/q with q <= N. Closed under negation mod 1.
struct FreqSet {
    uint64_t N = 1;
    double rho = 0.1;
    std::vector<nt::RationalFreq> members; // sorted by value

    double min_gap() const; // smallest circle distance between members
};

FreqSet build_freq_set(uint64_t N, double rho);

struct IWParams {
    double c0 = 2.0;        // frequency cutoff exponent: N = ceil(k^c0)
    double rho = 0.1;       // theorem-side radius exponent
    double rho_prime = 0.5; // flow-side bump scale exponent, rho < rho_prime < 1
    int k = 8;

    uint64_t freq_limit() const;          // ceil(k^c0)
    double nominal_flow_radius(const Bump& b) const;     // support / 2^(k^rho')
    double nominal_theorem_radius() const;               // e^(-N^(2 rho))
    void validate() const;
};

// The low-frequency projection multiplier on the M-point grid: a bump copy
// around every member of U. The nominal radii are unusable at desk scale
// (too wide at small N), so the support is shrunk to a quarter of the
// minimum gap when needed; the radius actually used is recorded here.
struct ArcMultiplier {
    uint64_t M = 0;
    double support_radius = 0.0;
    double plateau_radius = 0.0;
    double effective_scale = 0.0; // bump argument scale actually applied
    std::vector<double> values;   // multiplier at j/M, in [0, 1]

    // Safeguarded build; radius_request <= 0 means "nominal flow radius".
    // Throws ModelError when the requested arcs overlap, naming the pair.
    static ArcMultiplier build(const FreqSet& freqs, const IWParams& params, const Bump& bump,
                               uint64_t M, double radius_request = 0.0);
};

struct Projection {
    std::vector<double> low;  // f1
    std::vector<double> high; // f2 = f - f1, exactly
};

// f1^ = m * f^ on the M-point grid, f2 = f - f1.
Projection project_low(const std::vector<double>& f, const ArcMultiplier& mult);

struct ProjectionNormProbe {
    double best_ratio = 0.0; // max over trials of ||f1||_p / ||f||_p
    int best_trial = -1;
    uint64_t trials = 0;
};

// Empirical lower bound for the lp -> lp norm of f -> f1 over random and
// structured inputs (plateau tones, Dirichlet-like combs, sharp cutoffs).
// Deterministic for a fixed seed; trials run independently and merge by max.
ProjectionNormProbe measure_projection_norm(double p, const ArcMultiplier& mult, int trials,
                                            uint64_t seed);

} // namespace primelab
