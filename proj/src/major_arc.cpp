#include "primelab/major_arc.hpp"

#include "primelab/csv.hpp"
#include "primelab/errors.hpp"
#include "primelab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace primelab {

std::complex<double> block_profile(double z) {
    std::complex<double> w(0.0, -2.0 * M_PI * z);
    if (std::fabs(z) < 1e-6) {
        // (e^w - 1)/w, truncation error below 1e-28 at the series boundary
        return 1.0 + w * (1.0 / 2.0) + w * w * (1.0 / 6.0) + w * w * w * (1.0 / 24.0) +
               w * w * w * w * (1.0 / 120.0);
    }
    // e(-z) via the reduced fractional part; z and floor(z) share scale, so
    // the subtraction is exact and the phase keeps full precision.
    double f = z - std::floor(z);
    std::complex<double> en(std::cos(2.0 * M_PI * f), -std::sin(2.0 * M_PI * f));
    return (1.0 - en) / std::complex<double>(0.0, 2.0 * M_PI * z);
}

std::complex<double> eval_V(int k, double alpha) { return block_profile(std::ldexp(alpha, k)); }

ApproxParams ApproxParams::defaults(int k, double c0) {
    ApproxParams p;
    int by_cutoff = static_cast<int>(std::floor(c0 * std::log2(static_cast<double>(k))));
    int by_width = static_cast<int>(std::floor(k * (1.0 - p.eps_width))) - 1;
    p.t_max = std::max(0, std::min(by_cutoff, by_width));
    p.validate_for(k);
    return p;
}

void ApproxParams::validate_for(int k) const {
    if (k < 1) throw std::invalid_argument("ApproxParams: k must be >= 1");
    if (!(error_power >= 1.0)) throw std::invalid_argument("ApproxParams: A must be >= 1");
    if (!(arc_exponent >= 1.0)) throw std::invalid_argument("ApproxParams: C must be >= 1");
    if (!(eps_width > 0.0 && eps_width < 0.5))
        throw std::invalid_argument("ApproxParams: eps_width must lie in (0, 1/2)");
    if (t_max < 0) throw std::invalid_argument("ApproxParams: t_max must be >= 0");
    if (!(bump.support <= 0.5))
        throw std::invalid_argument("ApproxParams: bump support must be <= 1/2 on the circle");
    // Largest denominator of the deepest shell stays below the phi-arc scale.
    double max_q = std::ldexp(1.0, t_max + 1) - 1.0;
    if (max_q > std::exp2(k * (1.0 - eps_width)))
        throw std::invalid_argument("ApproxParams: shells reach past the phi arc scale "
                                    "(2^(t_max+1)-1 > 2^(k(1-eps)))");
}

double ApproxParams::chi_scale(int t) const { return std::exp2(arc_exponent * t); }

double ApproxParams::phi_scale(int k, int t) const {
    if (width_mode == WidthMode::matched) return chi_scale(t);
    return std::exp2(k * (1.0 - eps_width));
}

namespace {

// signed circle distance alpha - v reduced to (-1/2, 1/2]
double circle_dist(double alpha, double v) {
    double d = alpha - v;
    d -= std::round(d);
    return d;
}

std::vector<std::vector<ArcFraction>> build_shells(int t_max, bool skip_mu_zero) {
    uint64_t qmax = (uint64_t(1) << (t_max + 1)) - 1;
    nt::FactorTable ft(static_cast<uint32_t>(std::max<uint64_t>(qmax, 1)));
    std::vector<std::vector<ArcFraction>> shells(t_max + 1);
    for (int t = 0; t <= t_max; ++t) {
        uint64_t lo = uint64_t(1) << t, hi = uint64_t(1) << (t + 1);
        for (uint64_t q = lo; q < hi; ++q) {
            int mu = ft.mobius(static_cast<uint32_t>(q));
            if (skip_mu_zero && mu == 0) continue;
            double coef = mu / static_cast<double>(ft.totient(static_cast<uint32_t>(q)));
            if (q == 1) {
                shells[t].push_back({0.0, 0, 1, coef});
                continue;
            }
            for (uint64_t a = 1; a < q; ++a)
                if (std::gcd(a, q) == 1)
                    shells[t].push_back(
                        {static_cast<double>(a) / static_cast<double>(q), a, q, coef});
        }
        std::sort(shells[t].begin(), shells[t].end(),
                  [](const ArcFraction& x, const ArcFraction& y) { return x.value < y.value; });
    }
    return shells;
}

} // namespace

MajorArcEvaluator::MajorArcEvaluator(int k, ApproxParams params)
    : k_(k), params_(std::move(params)) {
    params_.validate_for(k_);
    shells_ = build_shells(params_.t_max, /*skip_mu_zero=*/true);
    shells_full_ = build_shells(params_.t_max, /*skip_mu_zero=*/false);
    for (const auto& shell : shells_full_)
        for (const auto& f : shell) {
            all_values_.push_back(f.value);
            all_fracs_.push_back({f.a, f.q});
        }
    std::vector<size_t> order(all_values_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [this](size_t x, size_t y) { return all_values_[x] < all_values_[y]; });
    std::vector<double> vals;
    std::vector<nt::RationalFreq> fracs;
    for (size_t i : order) {
        vals.push_back(all_values_[i]);
        fracs.push_back(all_fracs_[i]);
    }
    all_values_ = std::move(vals);
    all_fracs_ = std::move(fracs);
}

const std::vector<ArcFraction>& MajorArcEvaluator::shell_fractions(int t) const {
    if (t < 0 || t > params_.t_max) throw std::invalid_argument("shell index out of range");
    return shells_full_[t];
}

// Sum coef * V_k(alpha - a/q) * bump(scale*(alpha - a/q)) over the fractions
// whose scaled support contains alpha. The table is sorted by value, so only
// an O(1) neighborhood found by binary search is visited.
void MajorArcEvaluator::accumulate(const std::vector<ArcFraction>& fracs, double alpha,
                                   double scale, std::complex<double>& acc) const {
    double radius = params_.bump.support_radius(scale);
    alpha -= std::floor(alpha);
    auto visit = [&](double center_shift) {
        double lo = alpha - radius + center_shift, hi = alpha + radius + center_shift;
        auto first = std::lower_bound(fracs.begin(), fracs.end(), lo,
                                      [](const ArcFraction& f, double v) { return f.value < v; });
        for (auto it = first; it != fracs.end() && it->value <= hi; ++it) {
            double d = circle_dist(alpha, it->value);
            double b = params_.bump(scale * d);
            if (b != 0.0) acc += it->coef * b * block_profile(std::ldexp(d, k_));
        }
    };
    visit(0.0);
    // wraparound: fractions near the opposite end of [0, 1)
    if (alpha - radius < 0.0) visit(1.0);
    if (alpha + radius > 1.0) visit(-1.0);
}

std::complex<double> MajorArcEvaluator::shell(int t, double alpha, BumpVariant variant) const {
    if (t < 0 || t > params_.t_max)
        throw std::invalid_argument("shell: t must lie in [0, t_max]");
    double scale =
        variant == BumpVariant::chi ? params_.chi_scale(t) : params_.phi_scale(k_, t);
    std::complex<double> acc(0.0, 0.0);
    accumulate(shells_[t], alpha, scale, acc);
    return acc;
}

std::complex<double> MajorArcEvaluator::total(double alpha, BumpVariant variant) const {
    std::complex<double> acc(0.0, 0.0);
    for (int t = 0; t <= params_.t_max; ++t) acc += shell(t, alpha, variant);
    return acc;
}

std::complex<double> MajorArcEvaluator::gap(double alpha,
                                            std::vector<std::complex<double>>* per_shell) const {
    std::complex<double> acc(0.0, 0.0);
    if (per_shell) per_shell->assign(params_.t_max + 1, {0.0, 0.0});
    for (int t = 0; t <= params_.t_max; ++t) {
        std::complex<double> d =
            shell(t, alpha, BumpVariant::phi) - shell(t, alpha, BumpVariant::chi);
        if (per_shell) (*per_shell)[t] = d;
        acc += d;
    }
    return acc;
}

nt::RationalFreq MajorArcEvaluator::nearest_fraction(double alpha) const {
    alpha -= std::floor(alpha);
    auto it = std::lower_bound(all_values_.begin(), all_values_.end(), alpha);
    size_t n = all_values_.size();
    size_t hi = static_cast<size_t>(it - all_values_.begin()) % n;
    size_t lo = (hi + n - 1) % n;
    double dhi = std::fabs(circle_dist(alpha, all_values_[hi]));
    double dlo = std::fabs(circle_dist(alpha, all_values_[lo]));
    return dlo <= dhi ? all_fracs_[lo] : all_fracs_[hi];
}

void ErrorProfile::write_csv(std::ostream& os, const std::string& metadata,
                             const MajorArcEvaluator& eval) const {
    CsvWriter csv(os);
    csv.metadata(metadata);
    csv.header("alpha,re,im,abs,nearest_fraction_a,nearest_fraction_q");
    for (uint64_t j = 0; j < difference.size; ++j) {
        double alpha = difference.alpha(j);
        nt::RationalFreq f = eval.nearest_fraction(alpha);
        csv.field(alpha)
            .field(difference.values[j].real())
            .field(difference.values[j].imag())
            .field(std::abs(difference.values[j]))
            .field(f.a)
            .field(f.q);
        csv.end_row();
    }
}

ErrorProfile error_profile(const PrimeKernel& kernel, const ApproxParams& params, uint64_t N) {
    MajorArcEvaluator eval(kernel.k, params);
    SpectralGrid grid = kernel_fourier_grid(kernel, N);
    ErrorProfile out;
    out.difference.size = N;
    out.difference.values.resize(N);
    parallel_for(N, [&](uint64_t lo, uint64_t hi) {
        for (uint64_t j = lo; j < hi; ++j) {
            double alpha = out.difference.alpha(j);
            out.difference.values[j] = grid.values[j] - eval.total(alpha, BumpVariant::chi);
        }
    });
    // sup from the stored grid; sequential so the argmax is thread-count independent
    for (uint64_t j = 0; j < N; ++j) {
        double a = std::abs(out.difference.values[j]);
        if (a > out.sup) {
            out.sup = a;
            out.sup_alpha = out.difference.alpha(j);
        }
    }
    return out;
}

namespace {

// Offsets probing one transition annulus [r1/scale, r2/scale] around an arc
// center, sampled finely enough to resolve the V_k oscillation (period 2^-k)
// and extended a little past both edges.
void annulus_offsets(const Bump& bump, double scale, int k, std::vector<double>& out) {
    double inner = bump.plateau / scale, outer = bump.support / scale;
    double osc = std::ldexp(1.0, -k) / 8.0;             // 8 samples per |V| period
    double step = std::min(osc, (outer - inner) / 48.0); // at least 48 across the annulus
    double from = inner * 0.5, to = outer * 1.5;
    uint64_t count = static_cast<uint64_t>((to - from) / step);
    if (count > 4096) { // wide arcs: geometric coverage instead of linear
        for (double d = from; d < to; d *= 1.07) {
            out.push_back(d);
            out.push_back(-d);
        }
        return;
    }
    for (double d = from; d <= to; d += step) {
        out.push_back(d);
        out.push_back(-d);
    }
}

} // namespace

GapReport lemma_gap_sup(int k, const ApproxParams& params, uint64_t grid_n) {
    MajorArcEvaluator eval(k, params);
    if (grid_n == 0) grid_n = uint64_t(1) << std::min(k + 4, 20);

    int shells = params.t_max + 1;
    GapReport report;
    report.uniform_grid = grid_n;
    report.per_shell_sup.assign(shells, 0.0);
    report.per_shell_alpha.assign(shells, 0.0);

    // sample points: uniform grid plus refinement clusters around every arc
    std::vector<double> points;
    points.reserve(grid_n);
    for (uint64_t j = 0; j < grid_n; ++j)
        points.push_back(static_cast<double>(j) / static_cast<double>(grid_n));
    for (int t = 0; t < shells; ++t) {
        std::vector<double> offsets;
        annulus_offsets(params.bump, params.phi_scale(k, t), k, offsets);
        annulus_offsets(params.bump, params.chi_scale(t), k, offsets);
        for (const auto& f : eval.shell_fractions(t)) {
            if (f.coef == 0.0) continue;
            for (double d : offsets) {
                double alpha = f.value + d;
                alpha -= std::floor(alpha);
                points.push_back(alpha);
            }
        }
    }
    report.samples = points.size();

    struct Local {
        double sup = 0.0, alpha = 0.0;
        std::vector<double> shell_sup, shell_alpha;
        std::vector<GapSample> top;
    };
    std::vector<Local> locals(thread_count());
    for (auto& l : locals) {
        l.shell_sup.assign(shells, 0.0);
        l.shell_alpha.assign(shells, 0.0);
    }
    std::mutex mu;
    unsigned slot_id = 0;
    parallel_for(points.size(), [&](uint64_t lo, uint64_t hi) {
        unsigned slot;
        {
            std::lock_guard<std::mutex> lock(mu);
            slot = slot_id++;
        }
        Local& l = locals[slot];
        std::vector<std::complex<double>> per_shell;
        // ties broken toward smaller alpha so results do not depend on the
        // block decomposition (and hence the worker count)
        for (uint64_t i = lo; i < hi; ++i) {
            std::complex<double> g = eval.gap(points[i], &per_shell);
            double a = std::abs(g);
            if (a > l.sup || (a == l.sup && points[i] < l.alpha)) {
                l.sup = a;
                l.alpha = points[i];
            }
            for (int t = 0; t < shells; ++t) {
                double s = std::abs(per_shell[t]);
                if (s > l.shell_sup[t] || (s == l.shell_sup[t] && points[i] < l.shell_alpha[t])) {
                    l.shell_sup[t] = s;
                    l.shell_alpha[t] = points[i];
                }
            }
            if (a > 1e-14) l.top.push_back({points[i], g});
        }
        std::sort(l.top.begin(), l.top.end(),
                  [](const GapSample& x, const GapSample& y) { return std::abs(x.value) > std::abs(y.value); });
        if (l.top.size() > 64) l.top.resize(64);
    });

    std::vector<GapSample> merged;
    bool first_local = true;
    for (const auto& l : locals) {
        if (l.sup > report.sup ||
            (l.sup == report.sup && (first_local || l.alpha < report.sup_alpha))) {
            report.sup = l.sup;
            report.sup_alpha = l.alpha;
        }
        for (int t = 0; t < shells; ++t)
            if (l.shell_sup[t] > report.per_shell_sup[t] ||
                (l.shell_sup[t] == report.per_shell_sup[t] &&
                 (first_local || l.shell_alpha[t] < report.per_shell_alpha[t]))) {
                report.per_shell_sup[t] = l.shell_sup[t];
                report.per_shell_alpha[t] = l.shell_alpha[t];
            }
        first_local = false;
        merged.insert(merged.end(), l.top.begin(), l.top.end());
    }
    std::sort(merged.begin(), merged.end(), [](const GapSample& x, const GapSample& y) {
        if (std::abs(x.value) != std::abs(y.value)) return std::abs(x.value) > std::abs(y.value);
        return x.alpha < y.alpha;
    });
    if (merged.size() > 64) merged.resize(64);
    report.top_samples = std::move(merged);
    return report;
}

DisjointnessReport disjointness_check(int t, const ApproxParams& params) {
    if (t < 0) throw std::invalid_argument("disjointness_check: t must be >= 0");
    uint64_t lo = uint64_t(1) << t, hi = uint64_t(1) << (t + 1);
    std::vector<nt::RationalFreq> fracs;
    for (uint64_t q = lo; q < hi; ++q) {
        if (q == 1) {
            fracs.push_back({0, 1});
            continue;
        }
        for (uint64_t a = 1; a < q; ++a)
            if (std::gcd(a, q) == 1) fracs.push_back({a, q});
    }
    std::sort(fracs.begin(), fracs.end(), nt::frac_less);

    double radius = params.bump.support_radius(params.chi_scale(t));
    DisjointnessReport report;
    report.fraction_count = fracs.size();
    if (fracs.size() < 2) {
        report.disjoint = true;
        report.min_gap = 1.0 - 2.0 * radius; // wraparound slack of the lone arc
        report.first = report.second = fracs.empty() ? nt::RationalFreq{0, 1} : fracs[0];
        return report;
    }
    // Equal radii: only consecutive arcs (cyclically) can touch.
    report.min_gap = 2.0;
    for (size_t i = 0; i < fracs.size(); ++i) {
        const auto& f = fracs[i];
        const auto& g = fracs[(i + 1) % fracs.size()];
        double spacing = g.value() - f.value();
        if (i + 1 == fracs.size()) spacing += 1.0;
        double gap = spacing - 2.0 * radius;
        if (gap < report.min_gap) {
            report.min_gap = gap;
            report.first = f;
            report.second = g;
        }
    }
    report.disjoint = report.min_gap >= 0.0;
    return report;
}

} // namespace primelab
