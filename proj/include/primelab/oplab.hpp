#pragma once

#include "primelab/iw.hpp"
#include "primelab/kernel.hpp"
#include "primelab/major_arc.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace primelab {

// Index window Q inside the cyclic model Z_M; scale-k studies use
// Q = [0, 2^(k+1)) with M >= 2^(k+2) so cyclic and line convolutions agree.
struct Window {
    uint64_t begin = 0;
    uint64_t length = 0;
};

// Sparse nonnegative kernel with integer atom positions; the common form
// behind the prime and fractional kernels.
struct AtomKernel {
    std::vector<uint64_t> offsets;
    std::vector<double> weights;
    uint64_t support() const { return offsets.empty() ? 0 : offsets.back(); }
    double max_weight() const;
};

AtomKernel as_atoms(const PrimeKernel& kernel);      // weights ln p / 2^k
AtomKernel as_atoms(const FractionalKernel& kernel); // weights ln p / p^lambda

// Convolution operator on Z_M with the kernel spectrum cached.
class CirculantOp {
  public:
    CirculantOp(const AtomKernel& kernel, uint64_t M, bool alias_check = true);

    uint64_t M() const { return m_; }
    const AtomKernel& kernel() const { return kernel_; }
    const std::vector<std::complex<double>>& symbol() const { return symbol_; }
    double symbol_max() const; // max over j of |K^(j/M)|

    std::vector<double> apply(const std::vector<double>& f) const;         // K * f, spectral
    std::vector<double> apply_adjoint(const std::vector<double>& g) const; // correlation
    std::vector<double> apply_direct(const std::vector<double>& f) const;  // O(|f|*atoms) sum

  private:
    AtomKernel kernel_;
    uint64_t m_;
    std::vector<std::complex<double>> symbol_;
};

// Spec'd convolution entry point: exact cyclic convolution, spectral path,
// rejected when the model size would alias the kernel support.
std::vector<double> convolve(const PrimeKernel& kernel, const std::vector<double>& f);
std::vector<double> convolve(const FractionalKernel& kernel, const std::vector<double>& f);

// lp norms with the p = 1 and p = inf endpoints included.
double lp_norm(const std::vector<double>& v, double p);

// ||K*f||_p' / ||f||_p on the model; endpoints allowed here.
double rayleigh_ratio(const CirculantOp& op, const std::vector<double>& f, double p,
                      double pprime);

struct AscentResult {
    double best_ratio = 0.0;
    std::vector<double> witness;        // the maximizing input, lp-normalized
    std::vector<double> objective_path; // per-iteration objective of the best start
    int best_start = -1;
};

// Alternating-duality ascent for a lower bound on the lp -> lp' norm:
// u = K*f, g = dual normalization of u in lp', f <- dual normalization of
// the adjoint image K~*g in lp. The objective is provably nondecreasing.
// Starts: delta, the kernel's own indicator, the window indicator, then
// random nonnegative profiles. Deterministic for a fixed seed.
AscentResult norm_lowerbound_search(const CirculantOp& op, double p, double pprime, int iters,
                                    uint64_t seed, int random_starts = 3);

struct PowerIterationResult {
    double value = 0.0; // estimated l2 -> l2 operator norm
    uint64_t iterations = 0;
};

// Power iteration on K~K with Aitken extrapolation of the Rayleigh sequence;
// the extrapolation resolves the near-degenerate top pair (the symbol values
// at alpha = 0 and 1/2 differ by only 2 ln 2 / 2^k).
PowerIterationResult power_iteration_l2(const CirculantOp& op, uint64_t max_iters = 20000,
                                        double tol = 1e-10, uint64_t seed = 1);

// Interpolated bound A1^(1-theta) * A2^theta for lp -> l(conjugate p),
// theta = 2(1 - 1/p); endpoints p = 1 and p = 2 reproduce A1 and A2.
double riesz_thorin_bound(double a1, double a2, double p);

inline double conjugate_exponent(double p) { return p / (p - 1.0); }

enum class SetFamily { random, interval, primes_shifted };

struct WeakTypeRow {
    int trial = 0;
    uint64_t size_f = 0, size_g = 0;
    double constant = 0.0;
};

struct WeakTypeReport {
    int k = 0;
    double eps = 0.0;
    SetFamily family = SetFamily::random;
    std::vector<WeakTypeRow> rows;
    double max_constant = 0.0;
};

// Restricted weak-type constants <K*1_F, 1_G> / [|Q| (|F|/|Q|)^(1-eps) (|G|/|Q|)^(1-eps)]
// over sampled F, G inside the window Q = [0, 2^(k+1)).
WeakTypeReport weak_type_sweep(const PrimeKernel& kernel, double eps, int trials, uint64_t seed,
                               SetFamily family);

struct Decomposition {
    std::vector<double> low_part;   // K * f1
    std::vector<double> main_part;  // (L f2^)v
    std::vector<double> error_part; // (E f2^)v with E = K^ - L'
    double residual_l2 = 0.0;       // ||K*f - sum of parts||_2
    double gap_bound = 0.0;         // measured gap * ||f||_2
};

// Three-part split of K*f through the low-frequency projection and the
// phi-localized approximant; the parts re-sum to K*f up to the L vs L'
// substitution, and the residual obeys the measured gap bound.
Decomposition decompose(const PrimeKernel& kernel, const std::vector<double>& f,
                        const ArcMultiplier& mult, const MajorArcEvaluator& approx,
                        double measured_gap);

} // namespace primelab
