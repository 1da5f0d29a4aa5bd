#include "primelab/iw.hpp"

#include "primelab/errors.hpp"
#include "primelab/fft.hpp"
#include "primelab/parallel.hpp"
#include "primelab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace primelab {

double FreqSet::min_gap() const {
    if (members.size() < 2) return 1.0;
    double best = 2.0;
    for (size_t i = 0; i < members.size(); ++i) {
        double next = members[(i + 1) % members.size()].value();
        double cur = members[i].value();
        double gap = (i + 1 == members.size()) ? next + 1.0 - cur : next - cur;
        best = std::min(best, gap);
    }
    return best;
}

FreqSet build_freq_set(uint64_t N, double rho) {
    if (N < 1) throw std::invalid_argument("build_freq_set: N must be >= 1");
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("build_freq_set: rho must lie in (0, 1)");
    FreqSet set;
    set.N = N;
    set.rho = rho;
    set.members = nt::reduced_fractions(N);
    return set;
}

uint64_t IWParams::freq_limit() const {
    return static_cast<uint64_t>(std::ceil(std::pow(static_cast<double>(k), c0)));
}

double IWParams::nominal_flow_radius(const Bump& b) const {
    return b.support * std::exp2(-std::pow(static_cast<double>(k), rho_prime));
}

double IWParams::nominal_theorem_radius() const {
    double n = static_cast<double>(freq_limit());
    return std::exp(-std::pow(n, 2.0 * rho));
}

void IWParams::validate() const {
    if (k < 1) throw std::invalid_argument("IWParams: k must be >= 1");
    if (!(c0 >= 1.0)) throw std::invalid_argument("IWParams: c0 must be >= 1");
    if (!(rho > 0.0 && rho < rho_prime && rho_prime < 1.0))
        throw std::invalid_argument("IWParams: need 0 < rho < rho' < 1");
}

ArcMultiplier ArcMultiplier::build(const FreqSet& freqs, const IWParams& params, const Bump& bump,
                                   uint64_t M, double radius_request) {
    params.validate();
    if (!fft::is_pow2(M)) throw ModelError("ArcMultiplier: M must be a power of two");
    double gap = freqs.min_gap();
    // Explicit radius requests are honored verbatim and must keep arcs
    // disjoint; the default takes the nominal flow radius shrunk to a
    // quarter of the minimum gap (the nominal width is unusable at desk
    // scale and the construction only needs disjointness plus smallness).
    double radius;
    if (radius_request > 0.0) {
        radius = radius_request;
        if (freqs.members.size() >= 2 && 2.0 * radius > gap) {
            for (size_t i = 0; i < freqs.members.size(); ++i) {
                const auto& f = freqs.members[i];
                const auto& g = freqs.members[(i + 1) % freqs.members.size()];
                double spacing = g.value() - f.value();
                if (i + 1 == freqs.members.size()) spacing += 1.0;
                if (spacing < 2.0 * radius)
                    throw ModelError("ArcMultiplier: arcs overlap at " + std::to_string(f.a) +
                                     "/" + std::to_string(f.q) + " and " + std::to_string(g.a) +
                                     "/" + std::to_string(g.q));
            }
        }
    } else {
        radius = std::min(params.nominal_flow_radius(bump), 0.25 * gap);
    }

    ArcMultiplier mult;
    mult.M = M;
    mult.support_radius = radius;
    mult.effective_scale = bump.support / radius;
    mult.plateau_radius = bump.plateau / mult.effective_scale;

    // plateau strictly inside half the gap between members
    if (freqs.members.size() >= 2 && !(mult.plateau_radius < 0.5 * gap))
        throw ModelError("ArcMultiplier: plateau radius does not clear half the minimum gap");

    mult.values.assign(M, 0.0);
    double spacing = 1.0 / static_cast<double>(M);
    for (const auto& f : freqs.members) {
        double center = f.value();
        int64_t j_lo = static_cast<int64_t>(std::ceil((center - radius) / spacing));
        int64_t j_hi = static_cast<int64_t>(std::floor((center + radius) / spacing));
        for (int64_t j = j_lo; j <= j_hi; ++j) {
            double d = static_cast<double>(j) * spacing - center;
            double v = bump(mult.effective_scale * d);
            if (v == 0.0) continue;
            uint64_t idx = static_cast<uint64_t>(((j % static_cast<int64_t>(M)) + M) % M);
            mult.values[idx] += v; // disjoint arcs: at most one term lands per index
        }
    }
    return mult;
}

Projection project_low(const std::vector<double>& f, const ArcMultiplier& mult) {
    if (f.size() != mult.M) throw std::invalid_argument("project_low: signal length != M");
    fft::cvec in(f.size());
    for (size_t x = 0; x < f.size(); ++x) in[x] = f[x];
    fft::cvec spectrum = fft::forward(in);
    for (size_t j = 0; j < spectrum.size(); ++j) spectrum[j] *= mult.values[j];
    fft::cvec low = fft::inverse(spectrum);
    Projection out;
    out.low.resize(f.size());
    out.high.resize(f.size());
    for (size_t x = 0; x < f.size(); ++x) {
        out.low[x] = low[x].real(); // symmetric multiplier keeps real inputs real
        out.high[x] = f[x] - out.low[x];
    }
    return out;
}

namespace {

double lp_norm(const std::vector<double>& v, double p) {
    double s = 0.0;
    for (double x : v) s += std::pow(std::fabs(x), p);
    return std::pow(s, 1.0 / p);
}

// Structured and random probe signals. Trial 0 is the plateau tone at
// frequency 0 (ratio exactly 1); the Dirichlet-like trials concentrate
// spectrum near the arc centers.
std::vector<double> probe_signal(int trial, const ArcMultiplier& mult,
                                 const std::vector<double>& centers, uint64_t seed) {
    uint64_t M = mult.M;
    std::vector<double> f(M, 0.0);
    if (trial == 0) {
        std::fill(f.begin(), f.end(), 1.0);
        return f;
    }
    Rng rng(derive_seed(seed, static_cast<uint64_t>(trial)));
    int family = trial % 4;
    if (family == 1) { // Dirichlet comb over all centers, random signs
        for (double c : centers) {
            double s = rng.bernoulli(0.5) ? 1.0 : -1.0;
            double cj = std::round(c * static_cast<double>(M)) / static_cast<double>(M);
            for (uint64_t x = 0; x < M; ++x)
                f[x] += s * std::cos(2.0 * M_PI * cj * static_cast<double>(x));
        }
        return f;
    }
    if (family == 2) { // sharp spectral cutoff around one random center
        double c = centers[rng.below(centers.size())];
        int64_t cj = static_cast<int64_t>(std::round(c * static_cast<double>(M)));
        int64_t w = 1 + static_cast<int64_t>(rng.below(8));
        fft::cvec spec(M, {0.0, 0.0});
        for (int64_t d = -w; d <= w; ++d) {
            uint64_t j = static_cast<uint64_t>(((cj + d) % static_cast<int64_t>(M) + M) % M);
            spec[j] = 1.0;
            uint64_t jneg = j == 0 ? 0 : M - j;
            spec[jneg] = 1.0; // keep the signal real
        }
        fft::cvec sig = fft::inverse(spec);
        for (uint64_t x = 0; x < M; ++x) f[x] = sig[x].real();
        return f;
    }
    for (uint64_t x = 0; x < M; ++x) f[x] = rng.normal();
    return f;
}

} // namespace

ProjectionNormProbe measure_projection_norm(double p, const ArcMultiplier& mult, int trials,
                                            uint64_t seed) {
    if (!(p > 1.0 && std::isfinite(p)))
        throw std::invalid_argument("measure_projection_norm: p must lie in (1, inf)");
    if (trials < 1) throw std::invalid_argument("measure_projection_norm: trials must be >= 1");

    // arc centers with a grid point inside the plateau (tone candidates)
    std::vector<double> centers;
    double spacing = 1.0 / static_cast<double>(mult.M);
    for (uint64_t j = 0; j < mult.M; ++j)
        if (mult.values[j] == 1.0) centers.push_back(static_cast<double>(j) * spacing);
    if (centers.empty()) centers.push_back(0.0);

    std::vector<double> ratios(trials, 0.0);
    parallel_for(static_cast<uint64_t>(trials), [&](uint64_t lo, uint64_t hi) {
        for (uint64_t t = lo; t < hi; ++t) {
            std::vector<double> f = probe_signal(static_cast<int>(t), mult, centers, seed);
            double nf = lp_norm(f, p);
            if (nf == 0.0) continue;
            Projection proj = project_low(f, mult);
            ratios[t] = lp_norm(proj.low, p) / nf;
        }
    });
    ProjectionNormProbe probe;
    probe.trials = static_cast<uint64_t>(trials);
    for (int t = 0; t < trials; ++t)
        if (ratios[t] > probe.best_ratio) {
            probe.best_ratio = ratios[t];
            probe.best_trial = t;
        }
    return probe;
}

} // namespace primelab
