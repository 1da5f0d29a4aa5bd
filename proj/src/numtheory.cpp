#include "primelab/numtheory.hpp"

#include "primelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace primelab::nt {

namespace {

std::vector<uint8_t> sieve_flags(uint64_t limit) {
    std::vector<uint8_t> is_prime(limit + 1, 1);
    is_prime[0] = 0;
    if (limit >= 1) is_prime[1] = 0;
    for (uint64_t i = 2; i * i <= limit; ++i)
        if (is_prime[i])
            for (uint64_t j = i * i; j <= limit; j += i) is_prime[j] = 0;
    return is_prime;
}

} // namespace

PrimeTable sieve_primes(uint64_t limit) {
    if (limit < 2) throw std::invalid_argument("sieve_primes: limit must be >= 2 (empty table)");
    if (limit > kSieveCap)
        throw ResourceError("sieve_primes: limit " + std::to_string(limit) +
                            " exceeds sieve cap " + std::to_string(kSieveCap));
    auto flags = sieve_flags(limit);
    PrimeTable t;
    t.limit = limit;
    for (uint64_t i = 2; i <= limit; ++i)
        if (flags[i]) {
            t.primes.push_back(i);
            t.logweights.push_back(std::log(static_cast<double>(i)));
        }
    return t;
}

uint64_t prev_prime(uint64_t x) {
    if (x < 2) throw std::invalid_argument("prev_prime: x must be >= 2");
    PrimeTable t = sieve_primes(x);
    return t.primes.back();
}

int mobius(uint64_t q) {
    if (q == 0) throw std::invalid_argument("mobius: q must be >= 1");
    int factors = 0;
    for (uint64_t p = 2; p * p <= q; ++p) {
        if (q % p == 0) {
            q /= p;
            if (q % p == 0) return 0; // square factor
            ++factors;
        }
    }
    if (q > 1) ++factors;
    return (factors % 2 == 0) ? 1 : -1;
}

uint64_t totient(uint64_t q) {
    if (q == 0) throw std::invalid_argument("totient: q must be >= 1");
    uint64_t result = q;
    for (uint64_t p = 2; p * p <= q; ++p) {
        if (q % p == 0) {
            while (q % p == 0) q /= p;
            result -= result / p;
        }
    }
    if (q > 1) result -= result / q;
    return result;
}

FactorTable::FactorTable(uint32_t limit) : limit_(limit), spf_(limit + 1, 0) {
    if (limit > kSieveCap) throw ResourceError("FactorTable: limit exceeds sieve cap");
    for (uint32_t i = 2; i <= limit; ++i) {
        if (spf_[i] == 0) {
            for (uint64_t j = i; j <= limit; j += i)
                if (spf_[j] == 0) spf_[j] = i;
        }
    }
}

int FactorTable::mobius(uint32_t q) const {
    if (q == 0 || q > limit_) throw std::invalid_argument("FactorTable::mobius: q out of range");
    int factors = 0;
    while (q > 1) {
        uint32_t p = spf_[q];
        q /= p;
        if (q % p == 0) return 0;
        ++factors;
    }
    return (factors % 2 == 0) ? 1 : -1;
}

uint64_t FactorTable::totient(uint32_t q) const {
    if (q == 0 || q > limit_) throw std::invalid_argument("FactorTable::totient: q out of range");
    uint64_t result = q;
    while (q > 1) {
        uint32_t p = spf_[q];
        result -= result / p;
        while (q % p == 0) q /= p;
    }
    return result;
}

TotientScan totient_lowerbound_report(uint64_t qmax, double eps) {
    if (qmax < 2) throw std::invalid_argument("totient_lowerbound_report: qmax must be >= 2");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("totient_lowerbound_report: eps must lie in (0,1)");
    FactorTable ft(static_cast<uint32_t>(qmax));
    TotientScan best{1.0, 1}; // phi(1)/1 = 1 starts the scan
    for (uint64_t q = 2; q <= qmax; ++q) {
        double v = static_cast<double>(ft.totient(static_cast<uint32_t>(q))) /
                   std::pow(static_cast<double>(q), 1.0 - eps);
        if (v < best.minimum) {
            best.minimum = v;
            best.argmin = q;
        }
    }
    return best;
}

std::vector<RationalFreq> reduced_fractions(uint64_t N) {
    if (N < 1) throw std::invalid_argument("reduced_fractions: N must be >= 1");
    std::vector<RationalFreq> out;
    out.push_back({0, 1});
    for (uint64_t q = 2; q <= N; ++q)
        for (uint64_t a = 1; a < q; ++a)
            if (std::gcd(a, q) == 1) out.push_back({a, q});
    std::sort(out.begin(), out.end(), frac_less);
    return out;
}

double chebyshev_theta(const PrimeTable& table, double x) {
    if (x > static_cast<double>(table.limit))
        throw std::invalid_argument("chebyshev_theta: x exceeds table limit");
    double sum = 0.0;
    for (size_t i = 0; i < table.primes.size() && static_cast<double>(table.primes[i]) <= x; ++i)
        sum += table.logweights[i];
    return sum;
}

double chebyshev_theta(double x) {
    if (x < 2.0) return 0.0;
    PrimeTable t = sieve_primes(static_cast<uint64_t>(x));
    return chebyshev_theta(t, x);
}

} // namespace primelab::nt
