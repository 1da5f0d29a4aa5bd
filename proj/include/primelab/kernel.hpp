#pragma once

#include "primelab/numtheory.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace primelab {

// Weighted prime measure at dyadic scale k: atoms at primes p <= 2^k with
// weights ln p, normalized by 2^-k. Total mass is theta(2^k)/2^k.
struct PrimeKernel {
    int k = 1;
    std::vector<uint64_t> primes;
    std::vector<double> logweights; // ln p
    double scale = 0.5;             // 2^-k

    double total_mass() const;
    double max_value() const;       // ln(largest prime <= 2^k) / 2^k
};

PrimeKernel build_kernel(int k); // 1 <= k <= 24

// Truncated fractional kernel: atoms at primes p <= P with weights ln p / p^lambda.
// lambda = 0 degenerates to plain log weights.
struct FractionalKernel {
    double lambda = 1.0;
    uint64_t truncation = 2;
    std::vector<uint64_t> primes;
    std::vector<double> weights; // ln p * p^-lambda

    double total_weight() const;
};

FractionalKernel build_fractional_kernel(double lambda, uint64_t P);

// exp(2*pi*i*t)
std::complex<double> unit_phase(double t);

// Fourier transform of the prime kernel at a point:
//   (1/2^k) * sum_p exp(-2*pi*i*p*alpha) * ln p,  alpha taken mod 1.
// The phase p*alpha is reduced mod 1 in double-double arithmetic so grid
// and pointwise evaluations agree to ~1e-13 even at k = 20+.
std::complex<double> kernel_fourier(const PrimeKernel& kernel, double alpha);

struct SpectralGrid {
    uint64_t size = 0;
    std::vector<std::complex<double>> values; // values[j] at alpha = j/size

    double alpha(uint64_t j) const { return static_cast<double>(j) / static_cast<double>(size); }
    // columns: j, alpha, re, im, abs
    void write_csv(std::ostream& os, const std::string& metadata) const;
};

// FFT evaluation of the transform on the grid {j/N}. N must be a power of
// two >= 2^(k+2) (alias-free margin) and is capped at 2^24.
SpectralGrid kernel_fourier_grid(const PrimeKernel& kernel, uint64_t N);

// Derivative bound for alpha -> |K^(alpha)|: 2*pi*2^-k*sum p*ln p.
double fourier_lipschitz_bound(const PrimeKernel& kernel);

struct SupBracket {
    double lo = 0.0;            // max over evaluated samples (attained value)
    double hi = 0.0;            // certified upper bound for the continuum sup
    uint64_t effective_grid = 0; // grid size the certificate is equivalent to
    uint64_t evaluations = 0;
};

// Certified bracket [lo, hi] containing sup over alpha of |K^(alpha)|, with
// hi - lo <= delta. Seeds from an FFT grid, then refines only the cells whose
// Lipschitz certificate stays above lo + delta.
SupBracket sup_norm_certified(const PrimeKernel& kernel, double delta);

} // namespace primelab
