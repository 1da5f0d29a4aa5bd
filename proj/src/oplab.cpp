#include "primelab/oplab.hpp"

#include "primelab/errors.hpp"
#include "primelab/fft.hpp"
#include "primelab/parallel.hpp"
#include "primelab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace primelab {

double AtomKernel::max_weight() const {
    double m = 0.0;
    for (double w : weights) m = std::max(m, w);
    return m;
}

AtomKernel as_atoms(const PrimeKernel& kernel) {
    AtomKernel a;
    a.offsets = kernel.primes;
    a.weights.reserve(kernel.logweights.size());
    for (double w : kernel.logweights) a.weights.push_back(w * kernel.scale);
    return a;
}

AtomKernel as_atoms(const FractionalKernel& kernel) {
    AtomKernel a;
    a.offsets = kernel.primes;
    a.weights = kernel.weights;
    return a;
}

CirculantOp::CirculantOp(const AtomKernel& kernel, uint64_t M, bool alias_check)
    : kernel_(kernel), m_(M) {
    if (!fft::is_pow2(M)) throw ModelError("CirculantOp: M must be a power of two");
    if (alias_check && M < 4 * std::max<uint64_t>(kernel.support(), 1))
        throw ModelError("CirculantOp: M = " + std::to_string(M) +
                         " aliases a kernel supported out to " + std::to_string(kernel.support()));
    fft::cvec layout(M, {0.0, 0.0});
    for (size_t i = 0; i < kernel_.offsets.size(); ++i)
        layout[kernel_.offsets[i] % M] += kernel_.weights[i];
    symbol_ = fft::forward(layout);
}

double CirculantOp::symbol_max() const {
    double m = 0.0;
    for (const auto& z : symbol_) m = std::max(m, std::abs(z));
    return m;
}

std::vector<double> CirculantOp::apply(const std::vector<double>& f) const {
    if (f.size() != m_) throw std::invalid_argument("CirculantOp::apply: length mismatch");
    fft::cvec in(m_);
    for (uint64_t x = 0; x < m_; ++x) in[x] = f[x];
    fft::cvec spec = fft::forward(in);
    for (uint64_t j = 0; j < m_; ++j) spec[j] *= symbol_[j];
    fft::cvec out = fft::inverse(spec);
    std::vector<double> g(m_);
    for (uint64_t x = 0; x < m_; ++x) g[x] = out[x].real();
    return g;
}

std::vector<double> CirculantOp::apply_adjoint(const std::vector<double>& g) const {
    if (g.size() != m_) throw std::invalid_argument("CirculantOp::apply_adjoint: length mismatch");
    fft::cvec in(m_);
    for (uint64_t x = 0; x < m_; ++x) in[x] = g[x];
    fft::cvec spec = fft::forward(in);
    for (uint64_t j = 0; j < m_; ++j) spec[j] *= std::conj(symbol_[j]);
    fft::cvec out = fft::inverse(spec);
    std::vector<double> f(m_);
    for (uint64_t x = 0; x < m_; ++x) f[x] = out[x].real();
    return f;
}

std::vector<double> CirculantOp::apply_direct(const std::vector<double>& f) const {
    if (f.size() != m_) throw std::invalid_argument("CirculantOp::apply_direct: length mismatch");
    std::vector<double> g(m_, 0.0);
    for (size_t i = 0; i < kernel_.offsets.size(); ++i) {
        uint64_t p = kernel_.offsets[i] % m_;
        double w = kernel_.weights[i];
        for (uint64_t x = 0; x < m_; ++x) g[(x + p) % m_] += w * f[x];
    }
    return g;
}

std::vector<double> convolve(const PrimeKernel& kernel, const std::vector<double>& f) {
    CirculantOp op(as_atoms(kernel), f.size());
    return op.apply(f);
}

std::vector<double> convolve(const FractionalKernel& kernel, const std::vector<double>& f) {
    CirculantOp op(as_atoms(kernel), f.size());
    return op.apply(f);
}

double lp_norm(const std::vector<double>& v, double p) {
    if (p == std::numeric_limits<double>::infinity()) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::fabs(x));
        return m;
    }
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    double s = 0.0;
    for (double x : v) s += std::pow(std::fabs(x), p);
    return std::pow(s, 1.0 / p);
}

double rayleigh_ratio(const CirculantOp& op, const std::vector<double>& f, double p,
                      double pprime) {
    double nf = lp_norm(f, p);
    if (nf == 0.0) return 0.0;
    return lp_norm(op.apply(f), pprime) / nf;
}

namespace {

// Dual-normalization map: given u >= 0 and exponent r, returns the lr'
// witness direction u^(r-1) (so that <u, out>/||out||_{r'} = ||u||_r).
std::vector<double> dual_power(const std::vector<double>& u, double r) {
    std::vector<double> out(u.size());
    for (size_t i = 0; i < u.size(); ++i) out[i] = std::pow(std::max(u[i], 0.0), r - 1.0);
    return out;
}

void normalize_lp(std::vector<double>& v, double p) {
    double n = lp_norm(v, p);
    if (n > 0.0)
        for (double& x : v) x /= n;
}

} // namespace

AscentResult norm_lowerbound_search(const CirculantOp& op, double p, double pprime, int iters,
                                    uint64_t seed, int random_starts) {
    if (!(p > 1.0 && std::isfinite(p)) || !(pprime > 1.0 && std::isfinite(pprime)))
        throw std::invalid_argument("norm_lowerbound_search: exponents must lie in (1, inf)");
    if (iters < 1) throw std::invalid_argument("norm_lowerbound_search: iters must be >= 1");

    uint64_t M = op.M();
    std::vector<std::vector<double>> starts;
    std::vector<double> delta(M, 0.0);
    delta[0] = 1.0;
    starts.push_back(delta);
    std::vector<double> atoms(M, 0.0); // indicator of the kernel's own support
    for (uint64_t off : op.kernel().offsets) atoms[off % M] = 1.0;
    starts.push_back(atoms);
    std::vector<double> window(M, 0.0); // indicator of Q = [0, M/2)
    for (uint64_t x = 0; x < M / 2; ++x) window[x] = 1.0;
    starts.push_back(window);
    for (int s = 0; s < random_starts; ++s) {
        Rng rng(derive_seed(seed, 0xA5CE57ULL, static_cast<uint64_t>(s)));
        std::vector<double> f(M);
        for (uint64_t x = 0; x < M; ++x) f[x] = rng.uniform();
        starts.push_back(std::move(f));
    }

    std::vector<double> best_ratio(starts.size(), 0.0);
    std::vector<std::vector<double>> paths(starts.size());
    std::vector<std::vector<double>> witnesses(starts.size());

    parallel_for(starts.size(), [&](uint64_t lo, uint64_t hi) {
        for (uint64_t s = lo; s < hi; ++s) {
            std::vector<double> f = starts[s];
            normalize_lp(f, p);
            std::vector<double>& path = paths[s];
            for (int it = 0; it < iters; ++it) {
                std::vector<double> u = op.apply(f);
                for (double& x : u) x = std::max(x, 0.0); // nonneg kernel, nonneg input
                double obj = lp_norm(u, pprime);
                path.push_back(obj);
                if (obj == 0.0) break;
                std::vector<double> g = dual_power(u, pprime);
                normalize_lp(g, conjugate_exponent(pprime));
                std::vector<double> v = op.apply_adjoint(g);
                for (double& x : v) x = std::max(x, 0.0);
                std::vector<double> fn = dual_power(v, conjugate_exponent(p));
                normalize_lp(fn, p);
                if (lp_norm(fn, p) == 0.0) break;
                f = std::move(fn);
            }
            best_ratio[s] = path.empty() ? 0.0 : path.back();
            witnesses[s] = std::move(f);
        }
    });

    AscentResult result;
    for (size_t s = 0; s < starts.size(); ++s)
        if (best_ratio[s] > result.best_ratio) {
            result.best_ratio = best_ratio[s];
            result.best_start = static_cast<int>(s);
        }
    if (result.best_start >= 0) {
        result.objective_path = paths[result.best_start];
        result.witness = witnesses[result.best_start];
    }
    return result;
}

PowerIterationResult power_iteration_l2(const CirculantOp& op, uint64_t max_iters, double tol,
                                        uint64_t seed) {
    uint64_t M = op.M();
    Rng rng(derive_seed(seed, 0x9067E12ULL));
    std::vector<double> x(M);
    for (uint64_t i = 0; i < M; ++i) x[i] = rng.normal();
    normalize_lp(x, 2.0);

    // Rayleigh sequence of K~K is lambda1 - beta*r^n once two modes remain;
    // Aitken's delta-squared recovers the limit of such a geometric tail
    // exactly, which is what resolves the 2 ln2 / 2^k near-degeneracy.
    const uint64_t block = 40;
    std::vector<double> rho_samples;
    double rho = 0.0, extrapolated = 0.0, prev_extrapolated = -1.0;
    uint64_t iters = 0;
    while (iters < max_iters) {
        for (uint64_t i = 0; i < block; ++i) {
            std::vector<double> y = op.apply_adjoint(op.apply(x));
            rho = 0.0; // Rayleigh quotient <x, K~K x> with ||x||_2 = 1
            for (uint64_t j = 0; j < M; ++j) rho += x[j] * y[j];
            normalize_lp(y, 2.0);
            x = std::move(y);
            ++iters;
        }
        rho_samples.push_back(rho);
        if (rho_samples.size() >= 3) {
            size_t n = rho_samples.size();
            double d1 = rho_samples[n - 2] - rho_samples[n - 3];
            double d2 = rho_samples[n - 1] - rho_samples[n - 2];
            double dd = d2 - d1;
            extrapolated = std::fabs(dd) > 1e-300
                               ? rho_samples[n - 1] - d2 * d2 / dd
                               : rho_samples[n - 1];
            if (prev_extrapolated >= 0.0 && std::fabs(extrapolated - prev_extrapolated) < tol &&
                std::fabs(extrapolated - rho) < 1e-3)
                break;
            prev_extrapolated = extrapolated;
        }
    }
    PowerIterationResult out;
    double lam = rho_samples.size() >= 3 ? std::max(extrapolated, rho) : rho;
    out.value = std::sqrt(std::max(lam, 0.0));
    out.iterations = iters;
    return out;
}

double riesz_thorin_bound(double a1, double a2, double p) {
    if (!(a1 >= 0.0 && a2 >= 0.0))
        throw std::invalid_argument("riesz_thorin_bound: endpoint norms must be >= 0");
    if (!(p >= 1.0 && p <= 2.0))
        throw std::invalid_argument("riesz_thorin_bound: p must lie in [1, 2]");
    double theta = 2.0 * (1.0 - 1.0 / p); // solves 1/p = (1-theta)/1 + theta/2
    return std::pow(a1, 1.0 - theta) * std::pow(a2, theta);
}

namespace {

struct SetPair {
    std::vector<uint64_t> F, G;
};

SetPair draw_sets(SetFamily family, int trial, uint64_t window, const PrimeKernel& kernel,
                  uint64_t seed) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(trial), 0x5E75ULL));
    SetPair out;
    switch (family) {
        case SetFamily::random: {
            // densities log-uniform in [2^-k, 1] to stress the scaling range
            double df = std::exp2(-rng.uniform() * kernel.k);
            double dg = std::exp2(-rng.uniform() * kernel.k);
            for (uint64_t x = 0; x < window; ++x) {
                if (rng.bernoulli(df)) out.F.push_back(x);
                if (rng.bernoulli(dg)) out.G.push_back(x);
            }
            break;
        }
        case SetFamily::interval: {
            if (trial == 0) { // F = G = Q
                for (uint64_t x = 0; x < window; ++x) {
                    out.F.push_back(x);
                    out.G.push_back(x);
                }
                break;
            }
            if (trial == 1) { // singletons: F = {0}, G = {first prime}
                out.F.push_back(0);
                out.G.push_back(kernel.primes.front());
                break;
            }
            uint64_t lf = 1 + rng.below(window);
            uint64_t sf = rng.below(window - lf + 1);
            uint64_t lg = 1 + rng.below(window);
            uint64_t sg = rng.below(window - lg + 1);
            for (uint64_t x = sf; x < sf + lf; ++x) out.F.push_back(x);
            for (uint64_t x = sg; x < sg + lg; ++x) out.G.push_back(x);
            break;
        }
        case SetFamily::primes_shifted: {
            uint64_t shift_f = rng.below(window);
            uint64_t shift_g = rng.below(window);
            for (uint64_t p : kernel.primes) {
                if (p + shift_f < window) out.F.push_back(p + shift_f);
                if (p + shift_g < window) out.G.push_back(p + shift_g);
            }
            break;
        }
    }
    return out;
}

} // namespace

WeakTypeReport weak_type_sweep(const PrimeKernel& kernel, double eps, int trials, uint64_t seed,
                               SetFamily family) {
    if (!(eps > 0.0 && eps < 0.5))
        throw std::invalid_argument("weak_type_sweep: eps must lie in (0, 1/2)");
    if (trials < 1) throw std::invalid_argument("weak_type_sweep: trials must be >= 1");

    uint64_t M = uint64_t(1) << (kernel.k + 2);
    uint64_t window = uint64_t(1) << (kernel.k + 1); // Q = [0, 2^(k+1))
    CirculantOp op(as_atoms(kernel), M);

    WeakTypeReport report;
    report.k = kernel.k;
    report.eps = eps;
    report.family = family;
    report.rows.resize(trials);

    parallel_for(static_cast<uint64_t>(trials), [&](uint64_t lo, uint64_t hi) {
        for (uint64_t t = lo; t < hi; ++t) {
            SetPair sets = draw_sets(family, static_cast<int>(t), window, kernel, seed);
            WeakTypeRow row;
            row.trial = static_cast<int>(t);
            row.size_f = sets.F.size();
            row.size_g = sets.G.size();
            if (!sets.F.empty() && !sets.G.empty()) {
                std::vector<double> f(M, 0.0);
                for (uint64_t x : sets.F) f[x] = 1.0;
                std::vector<double> conv = op.apply(f);
                double pairing = 0.0;
                for (uint64_t x : sets.G) pairing += conv[x];
                double q = static_cast<double>(window);
                double denom = q * std::pow(row.size_f / q, 1.0 - eps) *
                               std::pow(row.size_g / q, 1.0 - eps);
                row.constant = pairing / denom;
            }
            report.rows[t] = row;
        }
    });
    for (const auto& row : report.rows) report.max_constant = std::max(report.max_constant, row.constant);
    return report;
}

Decomposition decompose(const PrimeKernel& kernel, const std::vector<double>& f,
                        const ArcMultiplier& mult, const MajorArcEvaluator& approx,
                        double measured_gap) {
    uint64_t M = f.size();
    if (M != mult.M) throw std::invalid_argument("decompose: signal length != multiplier grid");
    CirculantOp op(as_atoms(kernel), M);

    Projection proj = project_low(f, mult);
    Decomposition out;
    out.low_part = op.apply(proj.low);

    // spectra of f2 against the phi-localized sum L and the error E = K^ - L'
    fft::cvec f2(M);
    for (uint64_t x = 0; x < M; ++x) f2[x] = proj.high[x];
    fft::cvec f2_hat = fft::forward(f2);
    fft::cvec main_hat(M), err_hat(M);
    for (uint64_t j = 0; j < M; ++j) {
        double alpha = static_cast<double>(j) / static_cast<double>(M);
        std::complex<double> L = approx.total(alpha, BumpVariant::phi);
        std::complex<double> Lp = approx.total(alpha, BumpVariant::chi);
        std::complex<double> E = op.symbol()[j] - Lp;
        main_hat[j] = L * f2_hat[j];
        err_hat[j] = E * f2_hat[j];
    }
    fft::cvec main = fft::inverse(main_hat);
    fft::cvec err = fft::inverse(err_hat);
    out.main_part.resize(M);
    out.error_part.resize(M);
    for (uint64_t x = 0; x < M; ++x) {
        out.main_part[x] = main[x].real();
        out.error_part[x] = err[x].real();
    }

    std::vector<double> exact = op.apply(f);
    double resid = 0.0;
    for (uint64_t x = 0; x < M; ++x) {
        double d = exact[x] - (out.low_part[x] + out.main_part[x] + out.error_part[x]);
        resid += d * d;
    }
    out.residual_l2 = std::sqrt(resid);
    out.gap_bound = measured_gap * lp_norm(f, 2.0);
    return out;
}

} // namespace primelab
