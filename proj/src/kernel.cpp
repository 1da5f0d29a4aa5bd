#include "primelab/kernel.hpp"

#include "primelab/csv.hpp"
#include "primelab/errors.hpp"
#include "primelab/fft.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <ostream>
#include <stdexcept>
#include <string>

namespace primelab {

double PrimeKernel::total_mass() const {
    double s = 0.0;
    for (double w : logweights) s += w;
    return s * scale;
}

double PrimeKernel::max_value() const {
    return logweights.empty() ? 0.0 : logweights.back() * scale;
}

PrimeKernel build_kernel(int k) {
    if (k < 1 || k > 24) throw std::invalid_argument("build_kernel: k must lie in [1, 24]");
    nt::PrimeTable t = nt::sieve_primes(uint64_t(1) << k);
    PrimeKernel kernel;
    kernel.k = k;
    kernel.primes = std::move(t.primes);
    kernel.logweights = std::move(t.logweights);
    kernel.scale = std::ldexp(1.0, -k);
    return kernel;
}

double FractionalKernel::total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

FractionalKernel build_fractional_kernel(double lambda, uint64_t P) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("build_fractional_kernel: lambda must lie in [0, 1]");
    if (P < 2) throw std::invalid_argument("build_fractional_kernel: P must be >= 2");
    nt::PrimeTable t = nt::sieve_primes(P);
    FractionalKernel kernel;
    kernel.lambda = lambda;
    kernel.truncation = P;
    kernel.primes = t.primes;
    kernel.weights.reserve(t.primes.size());
    for (size_t i = 0; i < t.primes.size(); ++i)
        kernel.weights.push_back(t.logweights[i] *
                                 std::pow(static_cast<double>(t.primes[i]), -lambda));
    return kernel;
}

std::complex<double> unit_phase(double t) {
    double a = 2.0 * M_PI * t;
    return {std::cos(a), std::sin(a)};
}

namespace {

// Fractional part of p*alpha with the product formed by two-product FMA so
// the reduced phase keeps full double precision even when p*alpha ~ 2^40.
double frac_product(double p, double alpha) {
    double hi = p * alpha;
    double lo = std::fma(p, alpha, -hi);
    double f = hi - std::floor(hi); // exact: hi and floor(hi) share scale
    double phase = f + lo;
    phase -= std::floor(phase);
    if (phase >= 1.0) phase -= 1.0;
    return phase;
}

} // namespace

std::complex<double> kernel_fourier(const PrimeKernel& kernel, double alpha) {
    alpha -= std::floor(alpha);
    double re = 0.0, im = 0.0;
    for (size_t i = 0; i < kernel.primes.size(); ++i) {
        double phase = frac_product(static_cast<double>(kernel.primes[i]), alpha);
        double a = 2.0 * M_PI * phase;
        double w = kernel.logweights[i];
        re += w * std::cos(a);
        im -= w * std::sin(a); // e(-p*alpha)
    }
    return {re * kernel.scale, im * kernel.scale};
}

void SpectralGrid::write_csv(std::ostream& os, const std::string& metadata) const {
    CsvWriter csv(os);
    csv.metadata(metadata);
    csv.header("j,alpha,re,im,abs");
    for (uint64_t j = 0; j < size; ++j) {
        csv.field(j)
            .field(alpha(j))
            .field(values[j].real())
            .field(values[j].imag())
            .field(std::abs(values[j]));
        csv.end_row();
    }
}

SpectralGrid kernel_fourier_grid(const PrimeKernel& kernel, uint64_t N) {
    if (!fft::is_pow2(N))
        throw ModelError("kernel_fourier_grid: N must be a power of two, got " + std::to_string(N));
    if (N < (uint64_t(1) << (kernel.k + 2)))
        throw ModelError("kernel_fourier_grid: N = " + std::to_string(N) +
                         " is below the alias-free floor 2^(k+2) for k = " +
                         std::to_string(kernel.k));
    if (N > (uint64_t(1) << 24))
        throw ResourceError("kernel_fourier_grid: N = " + std::to_string(N) +
                            " exceeds the 2^24 grid cap");
    fft::cvec layout(N, {0.0, 0.0});
    for (size_t i = 0; i < kernel.primes.size(); ++i)
        layout[kernel.primes[i]] += kernel.logweights[i] * kernel.scale;
    SpectralGrid grid;
    grid.size = N;
    grid.values = fft::forward(layout);
    return grid;
}

double fourier_lipschitz_bound(const PrimeKernel& kernel) {
    double s = 0.0;
    for (size_t i = 0; i < kernel.primes.size(); ++i)
        s += static_cast<double>(kernel.primes[i]) * kernel.logweights[i];
    return 2.0 * M_PI * kernel.scale * s;
}

SupBracket sup_norm_certified(const PrimeKernel& kernel, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("sup_norm_certified: delta must be positive");
    double L = fourier_lipschitz_bound(kernel);
    double required = L / delta; // effective grid size the certificate needs
    if (required > 0x1p50)
        throw ResourceError("sup_norm_certified: delta = " + fmt_double(delta) +
                            " needs an effective grid of N >= " + fmt_double(required) +
                            " points, beyond the 2^50 cap");

    uint64_t n0 = uint64_t(1) << std::min(kernel.k + 4, 22);
    SpectralGrid seed = kernel_fourier_grid(kernel, n0);

    std::vector<double> mag(n0);
    double lo = 0.0;
    for (uint64_t j = 0; j < n0; ++j) {
        mag[j] = std::abs(seed.values[j]);
        lo = std::max(lo, mag[j]);
    }

    // Cell [a, b]: |K^| <= (f(a)+f(b))/2 + L*(b-a)/2. Split cells whose
    // certificate exceeds lo + delta, evaluating the midpoint directly.
    struct Cell {
        double a, b, fa, fb;
    };
    double h0 = 1.0 / static_cast<double>(n0);
    std::deque<Cell> active;
    double retired_hi = 0.0;
    auto cell_bound = [&](const Cell& c) { return 0.5 * (c.fa + c.fb) + 0.5 * L * (c.b - c.a); };
    for (uint64_t j = 0; j < n0; ++j) {
        Cell c{h0 * j, h0 * (j + 1), mag[j], mag[(j + 1) % n0]};
        if (cell_bound(c) > lo + delta)
            active.push_back(c);
        else
            retired_hi = std::max(retired_hi, cell_bound(c));
    }

    uint64_t evals = n0;
    const uint64_t budget = 20'000'000;
    double finest = h0;
    while (!active.empty()) {
        Cell c = active.front();
        active.pop_front();
        if (cell_bound(c) <= lo + delta) {
            retired_hi = std::max(retired_hi, cell_bound(c));
            continue;
        }
        double m = 0.5 * (c.a + c.b);
        double fm = std::abs(kernel_fourier(kernel, m));
        if (++evals > budget)
            throw ResourceError("sup_norm_certified: refinement budget exhausted; "
                                "effective grid N >= " + fmt_double(required) + " required");
        lo = std::max(lo, fm);
        finest = std::min(finest, 0.5 * (c.b - c.a));
        active.push_back({c.a, m, c.fa, fm});
        active.push_back({m, c.b, fm, c.fb});
    }

    SupBracket out;
    out.lo = lo;
    out.hi = std::max(lo, retired_hi);
    out.effective_grid = static_cast<uint64_t>(std::ceil(1.0 / finest));
    out.evaluations = evals;
    return out;
}

} // namespace primelab
