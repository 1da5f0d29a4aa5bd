#pragma once

#include "primelab/oplab.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace primelab {

struct NormReport {
    int k = 0;
    double p = 2.0, pprime = 2.0;
    double a1_exact = 0.0;           // l1 -> linf norm, exact
    SupBracket a2;                   // certified l2 -> l2 bracket
    double interpolated = 0.0;       // endpoint bound for (p, conjugate p)
    double embed_factor = 1.0;       // window Hoelder factor to reach pprime
    double interpolated_pprime = 0.0; // interpolated * embed_factor
    double searched = 0.0;           // ascent lower bound for (p, pprime)
    double power_iteration = 0.0;    // l2 operator norm on Z_M
    double grid_max = 0.0;           // max_j |K^(j/M)|
};

// Endpoint + certified + interpolated + searched norms at one scale.
NormReport norm_report(int k, double p, double pprime, double delta, int iters, uint64_t seed);

struct DecayRow {
    int k = 0;
    double a1_exact = 0.0;
    double a2_lo = 0.0, a2_hi = 0.0;
    double interpolated = 0.0; // for (p, conjugate p), embed factor recorded
    double embed_factor = 1.0;
    double searched = 0.0;     // ascent lower bound for (p, pprime)
    double predicted = 0.0;    // 2^(-k(1/p - 1/p' - eps))
};

struct DecayStudy {
    double p = 0.0, pprime = 0.0, eps = 0.0;
    std::vector<DecayRow> rows;
    double slope_interpolated = 0.0; // least-squares log2 slope vs k
    double slope_searched = 0.0;
    double slope_predicted = 0.0;
    // columns: k,a1_exact,a2_lo,a2_hi,interpolated,embed_factor,searched,predicted
    void write_csv(std::ostream& os, const std::string& metadata) const;
};

DecayStudy decay_study(int kmin, int kmax, double p, double pprime, double eps, double delta,
                       int iters, uint64_t seed);

struct TLambdaRow {
    uint64_t truncation = 0;
    int shells = 0;
    double total_weight = 0.0;     // sum of ln p / p^lambda
    double upper_partial_sum = 0.0; // triangle-inequality bound through this truncation
    double last_term = 0.0;
    double searched = 0.0;         // ascent lower bound on the finite model
};

struct TLambdaStudy {
    double lambda = 0.0, p = 0.0, pprime = 0.0;
    bool admissible = false; // 1/p' < 1/p - (1 - lambda)
    double model_embed_factor = 1.0;
    std::vector<TLambdaRow> rows;
    // columns: P,shells,total_weight,upper_partial_sum,last_term,searched
    void write_csv(std::ostream& os, const std::string& metadata) const;
};

TLambdaStudy t_lambda_study(double lambda, double p, double pprime,
                            const std::vector<uint64_t>& truncations, double delta, int iters,
                            uint64_t seed);

// Least-squares slope of log2(y) against k; zero rows yield 0.
double log2_slope(const std::vector<int>& k, const std::vector<double>& y);

} // namespace primelab
