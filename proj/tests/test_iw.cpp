#include "primelab/iw.hpp"

#include "primelab/errors.hpp"
#include "primelab/fft.hpp"
#include "primelab/rng.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace primelab;

namespace {

IWParams params_for(int k) {
    IWParams p;
    p.k = k;
    return p;
}

std::vector<double> random_signal(uint64_t M, uint64_t seed) {
    Rng rng(seed);
    std::vector<double> f(M);
    for (auto& x : f) x = rng.normal();
    return f;
}

} // namespace

TEST_CASE("frequency set basics and monotonicity") {
    auto u1 = build_freq_set(1, 0.1);
    REQUIRE(u1.members.size() == 1);
    CHECK(u1.members[0] == nt::RationalFreq{0, 1});

    auto u3 = build_freq_set(3, 0.1);
    CHECK(u3.members.size() == 4);

    // brute-force containment oracle and monotone growth
    for (uint64_t n = 1; n <= 20; ++n) {
        auto a = build_freq_set(n, 0.1);
        auto b = build_freq_set(n + 1, 0.1);
        for (const auto& f : a.members)
            CHECK(std::find(b.members.begin(), b.members.end(), f) != b.members.end());
        for (uint64_t q = 1; q <= n; ++q)
            for (uint64_t x = (q == 1 ? 0 : 1); x < (q == 1 ? 1 : q); ++x) {
                if (q > 1 && std::gcd(x, q) != 1) continue;
                CHECK(std::find(a.members.begin(), a.members.end(), nt::RationalFreq{x, q}) !=
                      a.members.end());
            }
    }

    // closed under negation mod 1
    auto u12 = build_freq_set(12, 0.1);
    for (const auto& f : u12.members) {
        nt::RationalFreq neg{f.a == 0 ? 0 : f.q - f.a, f.a == 0 ? 1 : f.q};
        CHECK(std::find(u12.members.begin(), u12.members.end(), neg) != u12.members.end());
    }
}

TEST_CASE("arc multiplier: safeguarded radii and plateau clearance") {
    IWParams p = params_for(10);
    auto freqs = build_freq_set(p.freq_limit(), p.rho); // N = 100
    Bump bump;
    auto mult = ArcMultiplier::build(freqs, p, bump, 1 << 14);
    double gap = freqs.min_gap();
    CHECK(mult.support_radius <= 0.25 * gap + 1e-18);
    CHECK(mult.plateau_radius < 0.5 * gap);
    CHECK(mult.support_radius < p.nominal_flow_radius(bump) + 1e-18);
    for (double v : mult.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    CHECK(mult.values[0] == 1.0); // 0/1 plateau holds the j = 0 grid point

    // explicit oversized radius is a model rejection naming the pair
    CHECK_THROWS_AS(ArcMultiplier::build(freqs, p, bump, 1 << 14, 0.75 * gap), ModelError);
    CHECK_THROWS_AS(ArcMultiplier::build(freqs, p, bump, 1000), ModelError); // M not pow2
}

TEST_CASE("projection: tones, exact complement, Parseval, linearity") {
    IWParams p = params_for(8);
    auto freqs = build_freq_set(p.freq_limit(), p.rho);
    Bump bump;
    uint64_t M = 1 << 12;
    auto mult = ArcMultiplier::build(freqs, p, bump, M);

    // constant signal = tone at theta = 0: plateau value 1, so f1 = f
    std::vector<double> ones(M, 1.0);
    auto proj = project_low(ones, mult);
    for (uint64_t x = 0; x < M; x += 97) {
        CHECK(proj.low[x] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(proj.high[x] == doctest::Approx(0.0).epsilon(1e-12));
    }

    // tone at 1/2 (a member of U, on-grid): f1 = f
    std::vector<double> alt(M);
    for (uint64_t x = 0; x < M; ++x) alt[x] = (x % 2 == 0) ? 1.0 : -1.0;
    auto proj_half = project_low(alt, mult);
    for (uint64_t x = 0; x < M; x += 101)
        CHECK(proj_half.low[x] == doctest::Approx(alt[x]).epsilon(1e-12));

    // tone outside every support projects to zero exactly
    uint64_t j_out = 0;
    for (uint64_t j = 1; j < M; ++j)
        if (mult.values[j] == 0.0 && mult.values[M - j] == 0.0) {
            j_out = j;
            break;
        }
    REQUIRE(j_out != 0);
    std::vector<double> tone(M);
    for (uint64_t x = 0; x < M; ++x)
        tone[x] = std::cos(2.0 * M_PI * static_cast<double>(j_out) * x / static_cast<double>(M));
    auto proj_out = project_low(tone, mult);
    for (uint64_t x = 0; x < M; x += 89)
        CHECK(std::fabs(proj_out.low[x]) < 1e-12); // zero up to transform roundoff

    // f1 + f2 = f and Parseval hold to 1e-10; linearity
    auto f = random_signal(M, 123);
    auto pr = project_low(f, mult);
    for (uint64_t x = 0; x < M; ++x)
        CHECK(std::fabs(pr.low[x] + pr.high[x] - f[x]) < 1e-10);

    fft::cvec in(M);
    for (uint64_t x = 0; x < M; ++x) in[x] = f[x];
    auto spec = fft::forward(in);
    double l2 = 0.0, spec_l2 = 0.0;
    for (uint64_t x = 0; x < M; ++x) l2 += f[x] * f[x];
    for (uint64_t j = 0; j < M; ++j) spec_l2 += std::norm(spec[j]);
    CHECK(l2 == doctest::Approx(spec_l2 / static_cast<double>(M)).epsilon(1e-10));

    auto g = random_signal(M, 456);
    auto prg = project_low(g, mult);
    std::vector<double> combo(M);
    for (uint64_t x = 0; x < M; ++x) combo[x] = 2.5 * f[x] - 1.25 * g[x];
    auto prc = project_low(combo, mult);
    for (uint64_t x = 0; x < M; x += 73)
        CHECK(prc.low[x] ==
              doctest::Approx(2.5 * pr.low[x] - 1.25 * prg.low[x]).epsilon(1e-9));
}

TEST_CASE("projected spectrum vanishes off the arcs") {
    IWParams p = params_for(6);
    auto freqs = build_freq_set(p.freq_limit(), p.rho);
    uint64_t M = 1 << 11;
    auto mult = ArcMultiplier::build(freqs, p, Bump{}, M);
    auto f = random_signal(M, 789);
    auto pr = project_low(f, mult);
    fft::cvec in(M);
    for (uint64_t x = 0; x < M; ++x) in[x] = pr.low[x];
    auto spec = fft::forward(in);
    for (uint64_t j = 0; j < M; ++j)
        if (mult.values[j] == 0.0) CHECK(std::abs(spec[j]) < 1e-9);
}

TEST_CASE("projection norm probe: p = 2 pins to the multiplier sup") {
    IWParams p = params_for(8);
    auto freqs = build_freq_set(p.freq_limit(), p.rho);
    uint64_t M = 1 << 12;
    auto mult = ArcMultiplier::build(freqs, p, Bump{}, M);
    auto probe = measure_projection_norm(2.0, mult, 24, 99);
    CHECK(probe.best_ratio == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(probe.best_ratio <= 1.0 + 1e-12);
    double msup = *std::max_element(mult.values.begin(), mult.values.end());
    CHECK(msup == 1.0);
}

TEST_CASE("projection norm probe: the tone witness keeps every p above 1") {
    IWParams p = params_for(6);
    auto freqs = build_freq_set(p.freq_limit(), p.rho);
    uint64_t M = 1 << 11;
    auto mult = ArcMultiplier::build(freqs, p, Bump{}, M);
    for (double lp : {1.5, 2.0, 3.0, 4.0}) {
        auto probe = measure_projection_norm(lp, mult, 16, 7);
        CHECK(probe.best_ratio >= 1.0 - 1e-12);
    }
    CHECK_THROWS_AS(measure_projection_norm(1.0, mult, 4, 7), std::invalid_argument);
    CHECK_THROWS_AS(measure_projection_norm(2.0, mult, 0, 7), std::invalid_argument);
}

TEST_CASE("projection norm probe is deterministic for a fixed seed") {
    IWParams p = params_for(7);
    auto freqs = build_freq_set(p.freq_limit(), p.rho);
    uint64_t M = 1 << 11;
    auto mult = ArcMultiplier::build(freqs, p, Bump{}, M);
    auto a = measure_projection_norm(4.0, mult, 20, 2024);
    auto b = measure_projection_norm(4.0, mult, 20, 2024);
    CHECK(a.best_ratio == b.best_ratio);
    CHECK(a.best_trial == b.best_trial);
}
