#pragma once

#include <cstdint>
#include <vector>

namespace primelab::nt {

// Hard cap for the flat bit sieve; larger requests error out instead of
// silently segmenting.
inline constexpr uint64_t kSieveCap = uint64_t(1) << 24;

struct PrimeTable {
    uint64_t limit = 0;
    std::vector<uint64_t> primes;    // ascending, complete up to limit
    std::vector<double> logweights;  // ln p, aligned with primes
};

// Complete prime list up to limit with natural-log weights.
// limit < 2 is an error (no empty tables), limit > kSieveCap hits the cap.
PrimeTable sieve_primes(uint64_t limit);

// Largest prime <= x (x >= 2).
uint64_t prev_prime(uint64_t x);

// Single-query Mobius and totient by direct factorization.
int mobius(uint64_t q);
uint64_t totient(uint64_t q);

// Smallest-prime-factor table for bulk mu/phi queries.
class FactorTable {
  public:
    explicit FactorTable(uint32_t limit);
    uint32_t limit() const { return limit_; }
    int mobius(uint32_t q) const;
    uint64_t totient(uint32_t q) const;

  private:
    uint32_t limit_;
    std::vector<uint32_t> spf_;
};

struct TotientScan {
    double minimum = 0.0;  // min over q <= qmax of phi(q)/q^(1-eps)
    uint64_t argmin = 0;
};

// Exhaustive scan of the totient lower-bound constant. qmax >= 2, eps in (0,1).
TotientScan totient_lowerbound_report(uint64_t qmax, double eps);

struct RationalFreq {
    uint64_t a = 0;  // numerator, 0 <= a < q, gcd(a, q) = 1
    uint64_t q = 1;  // denominator
    double value() const { return static_cast<double>(a) / static_cast<double>(q); }
    bool operator==(const RationalFreq&) const = default;
};

// Exact comparison by cross-multiplication (safe for desk-scale q).
inline bool frac_less(const RationalFreq& x, const RationalFreq& y) {
    return static_cast<unsigned __int128>(x.a) * y.q < static_cast<unsigned __int128>(y.a) * x.q;
}

// All reduced a/q with 0 <= a < q <= N, sorted by value. |result| = sum of phi(q).
std::vector<RationalFreq> reduced_fractions(uint64_t N);

// Chebyshev theta: sum of ln p over primes p <= x. Empty sum for x < 2.
double chebyshev_theta(double x);
double chebyshev_theta(const PrimeTable& table, double x);

} // namespace primelab::nt
