#pragma once

#include "primelab/bump.hpp"
#include "primelab/kernel.hpp"
#include "primelab/numtheory.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace primelab {

// Continuous dyadic-block profile V_k(alpha) = integral_0^1 e(-2^k t alpha) dt
// as a function of z = 2^k * alpha; a sinc with the removable singularity
// handled by a short Taylor series below |z| = 1e-6.
std::complex<double> block_profile(double z);
std::complex<double> eval_V(int k, double alpha);

enum class BumpVariant { chi, phi };

// Width policy for the arc bumps. Standard: chi arcs scale like 2^(C*t),
// phi arcs like 2^(k(1-eps)). MatchedWidths forces the phi width onto the
// chi width shell by shell -- a diagnostic mode in which the two
// localized sums coincide identically and the gap must vanish.
enum class WidthMode { standard, matched };

struct ApproxParams {
    double error_power = 2.0;  // A: target error power (reporting)
    double arc_exponent = 3.0; // C: chi arc-width exponent; >= 3 keeps shells disjoint
    double eps_width = 0.1;    // width exponent in the phi bump
    int t_max = 0;             // largest shell index; shell t holds q in [2^t, 2^(t+1))
    Bump bump{0.25, 0.5};
    WidthMode width_mode = WidthMode::standard;

    // t_max picked from the frequency cutoff 2^t >= k^c0, clipped so the
    // largest denominator stays below the phi-arc scale.
    static ApproxParams defaults(int k, double c0 = 2.0);

    // Largest denominator 2^(t_max+1) - 1 must not exceed 2^(k(1-eps)).
    void validate_for(int k) const;

    double chi_scale(int t) const;
    double phi_scale(int k, int t) const;
};

struct ArcFraction {
    double value;     // a/q in [0, 1)
    uint64_t a, q;
    double coef;      // mu(q)/phi(q)
};

// Evaluators for the localized approximants at fixed (k, params): the
// chi-variant sum L', the phi-variant sum L, their shells, and the gap
// L - L'. Fractions with mu(q) = 0 drop out of the sums but are kept in a
// side table for arc-geometry checks and nearest-fraction lookups.
class MajorArcEvaluator {
  public:
    MajorArcEvaluator(int k, ApproxParams params);

    int k() const { return k_; }
    const ApproxParams& params() const { return params_; }

    std::complex<double> shell(int t, double alpha, BumpVariant variant) const;
    std::complex<double> total(double alpha, BumpVariant variant) const;

    // L - L' at alpha; per_shell (when non-null) receives the shell-wise terms.
    std::complex<double> gap(double alpha, std::vector<std::complex<double>>* per_shell = nullptr) const;

    nt::RationalFreq nearest_fraction(double alpha) const;

    // all reduced fractions of shell t (mu = 0 included), sorted by value
    const std::vector<ArcFraction>& shell_fractions(int t) const;

  private:
    int k_;
    ApproxParams params_;
    std::vector<std::vector<ArcFraction>> shells_;        // mu(q) != 0 only
    std::vector<std::vector<ArcFraction>> shells_full_;   // all reduced fractions
    std::vector<double> all_values_;                      // merged, for nearest lookup
    std::vector<nt::RationalFreq> all_fracs_;

    void accumulate(const std::vector<ArcFraction>& fracs, double alpha, double scale,
                    std::complex<double>& acc) const;
};

struct ErrorProfile {
    SpectralGrid difference;   // E(j/N) = K^(j/N) - L'(j/N)
    double sup = 0.0;
    double sup_alpha = 0.0;
    // columns: alpha, re, im, abs, nearest_fraction_a, nearest_fraction_q
    void write_csv(std::ostream& os, const std::string& metadata,
                   const MajorArcEvaluator& eval) const;
};

// Grid profile of the approximation error E_k = K^_k - L'_k and its sup.
ErrorProfile error_profile(const PrimeKernel& kernel, const ApproxParams& params, uint64_t N);

struct GapSample {
    double alpha;
    std::complex<double> value;
};

struct GapReport {
    double sup = 0.0;
    double sup_alpha = 0.0;
    std::vector<double> per_shell_sup;      // indexed by t
    std::vector<double> per_shell_alpha;
    uint64_t uniform_grid = 0;
    uint64_t samples = 0;
    std::vector<GapSample> top_samples;     // largest |gap| values seen
};

// Measured sup over alpha of |L_k - L_k'|: a uniform alias-free grid plus
// per-fraction refinement clusters across both bump transition annuli,
// where the difference lives. grid_n = 0 picks 2^min(k+4, 20).
GapReport lemma_gap_sup(int k, const ApproxParams& params, uint64_t grid_n = 0);

struct DisjointnessReport {
    bool disjoint = true;
    double min_gap = 0.0;        // smallest gap between consecutive arc supports
    nt::RationalFreq first, second; // an offending (or extremal) pair
    uint64_t fraction_count = 0;
};

// Do the chi_t arcs of shell t have pairwise disjoint supports?
DisjointnessReport disjointness_check(int t, const ApproxParams& params);

} // namespace primelab
