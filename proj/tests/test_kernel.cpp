#include "primelab/kernel.hpp"

#include "primelab/errors.hpp"
#include "primelab/rng.hpp"

#include "doctest.h"

#include <cmath>
#include <complex>

using namespace primelab;

namespace {

// test-side oracle: naive transform in long double, no phase tricks
std::complex<double> oracle_fourier(const PrimeKernel& kernel, double alpha) {
    long double re = 0.0L, im = 0.0L;
    for (size_t i = 0; i < kernel.primes.size(); ++i) {
        long double arg = -2.0L * static_cast<long double>(M_PI) *
                          static_cast<long double>(kernel.primes[i]) *
                          static_cast<long double>(alpha);
        long double w = kernel.logweights[i];
        re += w * cosl(arg);
        im += w * sinl(arg);
    }
    return {static_cast<double>(re * kernel.scale), static_cast<double>(im * kernel.scale)};
}

double oracle_theta_trialdiv(uint64_t x) {
    auto is_prime = [](uint64_t n) {
        if (n < 2) return false;
        for (uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    };
    double s = 0.0;
    for (uint64_t n = 2; n <= x; ++n)
        if (is_prime(n)) s += std::log(static_cast<double>(n));
    return s;
}

} // namespace

TEST_CASE("prime kernel layout at small scales") {
    auto k1 = build_kernel(1);
    REQUIRE(k1.primes.size() == 1);
    CHECK(k1.primes[0] == 2);
    CHECK(k1.logweights[0] == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(k1.scale == 0.5);

    auto k2 = build_kernel(2);
    REQUIRE(k2.primes.size() == 2);
    CHECK(k2.primes[1] == 3);
    CHECK(k2.scale == 0.25);

    CHECK_THROWS_AS(build_kernel(0), std::invalid_argument);
    CHECK_THROWS_AS(build_kernel(25), std::invalid_argument);
}

TEST_CASE("kernel mass equals chebyshev theta over 2^k") {
    auto k10 = build_kernel(10);
    CHECK(k10.total_mass() == doctest::Approx(oracle_theta_trialdiv(1024) / 1024.0).epsilon(1e-13));
    CHECK(k10.total_mass() ==
          doctest::Approx(nt::chebyshev_theta(1024.0) / 1024.0).epsilon(1e-14));
}

TEST_CASE("pointwise transform: hand values") {
    auto k1 = build_kernel(1);
    auto v = kernel_fourier(k1, 0.0);
    CHECK(v.real() == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-15));
    CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-15));

    auto k2 = build_kernel(2);
    auto w = kernel_fourier(k2, 0.5); // e(-1) = 1, e(-3/2) = -1
    CHECK(w.real() == doctest::Approx((std::log(2.0) - std::log(3.0)) / 4.0).epsilon(1e-14));
    CHECK(w.imag() == doctest::Approx(0.0).epsilon(1e-13));

    auto k5 = build_kernel(5);
    CHECK(kernel_fourier(k5, 0.0).real() ==
          doctest::Approx(oracle_theta_trialdiv(32) / 32.0).epsilon(1e-14));
}

TEST_CASE("pointwise transform agrees with the long-double oracle") {
    auto kernel = build_kernel(8);
    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        double alpha = rng.uniform();
        auto a = kernel_fourier(kernel, alpha);
        auto b = oracle_fourier(kernel, alpha);
        CHECK(std::abs(a - b) < 1e-11);
    }
}

TEST_CASE("grid transform: single atom has constant modulus") {
    auto k1 = build_kernel(1);
    auto grid = kernel_fourier_grid(k1, 8);
    for (const auto& z : grid.values)
        CHECK(std::abs(z) == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-13));
}

TEST_CASE("grid transform matches pointwise evaluation and the oracle at alpha = 0") {
    auto k8 = build_kernel(8);
    auto grid = kernel_fourier_grid(k8, 1024);
    CHECK(grid.values[0].real() ==
          doctest::Approx(oracle_theta_trialdiv(256) / 256.0).epsilon(1e-13));

    Rng rng(11);
    for (int k : {4, 8, 10}) {
        auto kernel = build_kernel(k);
        uint64_t n = uint64_t(1) << (k + 2);
        auto g = kernel_fourier_grid(kernel, n);
        for (int i = 0; i < 100; ++i) {
            uint64_t j = rng.below(n);
            auto direct = kernel_fourier(kernel, g.alpha(j));
            CHECK(std::abs(g.values[j] - direct) < 1e-10);
        }
    }
}

TEST_CASE("grid transform rejects aliasing and oversized requests") {
    auto k8 = build_kernel(8);
    CHECK_THROWS_AS(kernel_fourier_grid(k8, 512), ModelError);  // below 2^(k+2)
    CHECK_THROWS_AS(kernel_fourier_grid(k8, 1000), ModelError); // not a power of two
    auto k24 = build_kernel(24);
    CHECK_THROWS_AS(kernel_fourier_grid(k24, uint64_t(1) << 26), ResourceError);
}

TEST_CASE("certified sup bracket: degenerate and small cases") {
    auto k1 = build_kernel(1);
    auto b = sup_norm_certified(k1, 1e-4);
    CHECK(b.lo == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-12));
    CHECK(b.hi - b.lo <= 1e-4);
    CHECK(b.hi >= std::log(2.0) / 2.0);

    auto k10 = build_kernel(10);
    auto b10 = sup_norm_certified(k10, 1e-3);
    double theta_ratio = oracle_theta_trialdiv(1024) / 1024.0;
    CHECK(b10.lo <= theta_ratio + 1e-12);
    CHECK(b10.hi >= theta_ratio - 1e-12);
    CHECK(b10.hi - b10.lo <= 1e-3);
}

TEST_CASE("certified sup bracket dominates random evaluations") {
    auto kernel = build_kernel(9);
    auto b = sup_norm_certified(kernel, 5e-4);
    CHECK(b.hi - b.lo <= 5e-4);
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        double alpha = rng.uniform();
        CHECK(std::abs(kernel_fourier(kernel, alpha)) <= b.hi + 1e-12);
    }
}

TEST_CASE("certified sup bracket rejects absurd precision") {
    auto kernel = build_kernel(12);
    CHECK_THROWS_AS(sup_norm_certified(kernel, 1e-40), ResourceError);
}

TEST_CASE("fractional kernel weights") {
    auto f = build_fractional_kernel(1.0, 3);
    REQUIRE(f.primes.size() == 2);
    CHECK(f.weights[0] == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-15));
    CHECK(f.weights[1] == doctest::Approx(std::log(3.0) / 3.0).epsilon(1e-15));

    auto g = build_fractional_kernel(0.0, 10); // degenerates to log weights
    REQUIRE(g.primes.size() == 4);
    for (size_t i = 0; i < g.primes.size(); ++i)
        CHECK(g.weights[i] ==
              doctest::Approx(std::log(static_cast<double>(g.primes[i]))).epsilon(1e-15));

    auto h = build_fractional_kernel(0.75, uint64_t(1) << 12);
    double oracle = 0.0;
    for (size_t i = 0; i < h.primes.size(); ++i)
        oracle += std::log(static_cast<double>(h.primes[i])) *
                  std::pow(static_cast<double>(h.primes[i]), -0.75);
    CHECK(h.total_weight() == doctest::Approx(oracle).epsilon(1e-13));
    for (size_t i = 0; i < h.primes.size(); ++i)
        CHECK(h.weights[i] > 0.0);
}

TEST_CASE("l1 -> linf endpoint: max kernel value is the last log weight") {
    auto table = nt::sieve_primes(uint64_t(1) << 20);
    for (int k = 1; k <= 20; ++k) {
        auto kernel = build_kernel(k);
        uint64_t prev = 0;
        for (uint64_t p : table.primes) {
            if (p > (uint64_t(1) << k)) break;
            prev = p;
        }
        CHECK(kernel.max_value() == std::log(static_cast<double>(prev)) * kernel.scale);
        CHECK(kernel.max_value() <= k * std::log(2.0) * kernel.scale);
    }
}
