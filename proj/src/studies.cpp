#include "primelab/studies.hpp"

#include "primelab/csv.hpp"
#include "primelab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace primelab {

double log2_slope(const std::vector<int>& k, const std::vector<double>& y) {
    if (k.size() != y.size() || k.size() < 2) return 0.0;
    double n = static_cast<double>(k.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < k.size(); ++i) {
        double x = static_cast<double>(k[i]);
        double v = std::log2(y[i]);
        sx += x;
        sy += v;
        sxx += x * x;
        sxy += x * v;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

// Window Hoelder factor bridging the conjugate-pair bound to a general
// target exponent: ||g||_{p'} <= |Q|^(1/p' - 1/pbar') ||g||_{pbar'} when
// p' < pbar', and 1 otherwise.
double embed_factor(double pprime, double pbar_prime, double window) {
    if (pprime >= pbar_prime) return 1.0;
    return std::pow(window, 1.0 / pprime - 1.0 / pbar_prime);
}

} // namespace

NormReport norm_report(int k, double p, double pprime, double delta, int iters, uint64_t seed) {
    PrimeKernel kernel = build_kernel(k);
    NormReport report;
    report.k = k;
    report.p = p;
    report.pprime = pprime;
    report.a1_exact = kernel.max_value();
    report.a2 = sup_norm_certified(kernel, delta);

    double pbar_prime = conjugate_exponent(p);
    report.interpolated = riesz_thorin_bound(report.a1_exact, report.a2.hi, p);
    uint64_t M = uint64_t(1) << (k + 2);
    report.embed_factor = embed_factor(pprime, pbar_prime, static_cast<double>(M) / 2.0);
    report.interpolated_pprime = report.interpolated * report.embed_factor;

    CirculantOp op(as_atoms(kernel), M);
    report.grid_max = op.symbol_max();
    report.power_iteration = power_iteration_l2(op, 20000, 1e-10, seed).value;
    report.searched = norm_lowerbound_search(op, p, pprime, iters, seed).best_ratio;
    return report;
}

void DecayStudy::write_csv(std::ostream& os, const std::string& metadata) const {
    CsvWriter csv(os);
    csv.metadata(metadata);
    csv.header("k,a1_exact,a2_lo,a2_hi,interpolated,embed_factor,searched,predicted");
    for (const auto& r : rows) {
        csv.field(r.k)
            .field(r.a1_exact)
            .field(r.a2_lo)
            .field(r.a2_hi)
            .field(r.interpolated)
            .field(r.embed_factor)
            .field(r.searched)
            .field(r.predicted);
        csv.end_row();
    }
    os << "# log2_slopes interpolated=" << fmt_double(slope_interpolated)
       << " searched=" << fmt_double(slope_searched)
       << " predicted=" << fmt_double(slope_predicted) << "\n";
}

DecayStudy decay_study(int kmin, int kmax, double p, double pprime, double eps, double delta,
                       int iters, uint64_t seed) {
    if (kmin < 1 || kmax < kmin || kmax > 24)
        throw std::invalid_argument("decay_study: need 1 <= kmin <= kmax <= 24");
    DecayStudy study;
    study.p = p;
    study.pprime = pprime;
    study.eps = eps;
    double pbar_prime = conjugate_exponent(p);
    for (int k = kmin; k <= kmax; ++k) {
        PrimeKernel kernel = build_kernel(k);
        DecayRow row;
        row.k = k;
        row.a1_exact = kernel.max_value();
        SupBracket a2 = sup_norm_certified(kernel, delta);
        row.a2_lo = a2.lo;
        row.a2_hi = a2.hi;
        row.interpolated = riesz_thorin_bound(row.a1_exact, row.a2_hi, p);
        uint64_t M = uint64_t(1) << (k + 2);
        row.embed_factor = embed_factor(pprime, pbar_prime, static_cast<double>(M) / 2.0);
        CirculantOp op(as_atoms(kernel), M);
        row.searched =
            norm_lowerbound_search(op, p, pprime, iters, derive_seed(seed, k), 2).best_ratio;
        row.predicted = std::exp2(-k * (1.0 / p - 1.0 / pprime - eps));
        study.rows.push_back(row);
    }
    std::vector<int> ks;
    std::vector<double> interp, searched, predicted;
    for (const auto& r : study.rows) {
        ks.push_back(r.k);
        interp.push_back(r.interpolated);
        searched.push_back(r.searched);
        predicted.push_back(r.predicted);
    }
    study.slope_interpolated = log2_slope(ks, interp);
    study.slope_searched = log2_slope(ks, searched);
    study.slope_predicted = log2_slope(ks, predicted);
    return study;
}

void TLambdaStudy::write_csv(std::ostream& os, const std::string& metadata) const {
    CsvWriter csv(os);
    csv.metadata(metadata);
    csv.header("P,shells,total_weight,upper_partial_sum,last_term,searched");
    for (const auto& r : rows) {
        csv.field(r.truncation)
            .field(r.shells)
            .field(r.total_weight)
            .field(r.upper_partial_sum)
            .field(r.last_term)
            .field(r.searched);
        csv.end_row();
    }
    os << "# admissible=" << (admissible ? "yes" : "no")
       << " model_embed_factor=" << fmt_double(model_embed_factor) << "\n";
}

TLambdaStudy t_lambda_study(double lambda, double p, double pprime,
                            const std::vector<uint64_t>& truncations, double delta, int iters,
                            uint64_t seed) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw std::invalid_argument("t_lambda_study: lambda must lie in (0, 1]");
    if (truncations.empty()) throw std::invalid_argument("t_lambda_study: no truncations given");

    TLambdaStudy study;
    study.lambda = lambda;
    study.p = p;
    study.pprime = pprime;
    study.admissible = (1.0 / pprime) < (1.0 / p) - (1.0 - lambda);

    uint64_t pmax = *std::max_element(truncations.begin(), truncations.end());
    int kmax = static_cast<int>(std::ceil(std::log2(static_cast<double>(pmax))));

    // per-scale bounds: dyadic shell k is dominated pointwise by
    // 2^(lambda) * 2^(k(1-lambda)) times the normalized kernel at scale k
    std::vector<double> scale_bound(kmax + 1, 0.0);
    double pbar_prime = conjugate_exponent(p);
    for (int k = 1; k <= kmax; ++k) {
        PrimeKernel kernel = build_kernel(k);
        SupBracket a2 = sup_norm_certified(kernel, delta);
        double bk = riesz_thorin_bound(kernel.max_value(), a2.hi, p);
        scale_bound[k] = std::exp2(lambda) * std::exp2(k * (1.0 - lambda)) * bk;
    }

    uint64_t model = uint64_t(4) << kmax; // alias-free for the largest truncation
    study.model_embed_factor = embed_factor(pprime, pbar_prime, static_cast<double>(model));

    for (uint64_t P : truncations) {
        TLambdaRow row;
        row.truncation = P;
        row.shells = static_cast<int>(std::ceil(std::log2(static_cast<double>(P))));
        FractionalKernel kernel = build_fractional_kernel(lambda, P);
        row.total_weight = kernel.total_weight();
        double sum = 0.0, last = 0.0;
        for (int k = 1; k <= row.shells; ++k) {
            last = scale_bound[k] * study.model_embed_factor;
            sum += last;
        }
        row.upper_partial_sum = sum;
        row.last_term = last;
        uint64_t m = 4;
        while (m < 4 * P) m <<= 1;
        CirculantOp op(as_atoms(kernel), m);
        row.searched = norm_lowerbound_search(op, p, pprime, iters, seed).best_ratio;
        study.rows.push_back(row);
    }
    return study;
}

} // namespace primelab
