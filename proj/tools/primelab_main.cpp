// Batch front door for the prime-kernel laboratory: every study behind one
// subcommand, deterministic for a fixed seed, CSV out (stdout or --out).
//
// Exit codes: 0 success, 2 bad flags, 3 model rejection (aliasing/overlap),
// 4 resource cap.

#include "primelab/csv.hpp"
#include "primelab/errors.hpp"
#include "primelab/iw.hpp"
#include "primelab/major_arc.hpp"
#include "primelab/numtheory.hpp"
#include "primelab/oplab.hpp"
#include "primelab/rng.hpp"
#include "primelab/studies.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

using namespace primelab;

namespace {

struct Output {
    std::string path;
    std::ofstream file;
    std::ostream& stream() {
        if (path.empty()) return std::cout;
        if (!file.is_open()) {
            file.open(path, std::ios::binary); // binary keeps LF endings everywhere
            if (!file) throw std::runtime_error("cannot open output file: " + path);
        }
        return file;
    }
};

struct CommonOpts {
    uint64_t seed = 1;
    Output out;
};

void add_common(CLI::App* cmd, CommonOpts& common) {
    cmd->add_option("--seed", common.seed, "RNG seed (default 1)");
    cmd->add_option("--out", common.out.path, "output file (default stdout)");
}

std::string echo_params(const std::string& cmd, uint64_t seed, const std::string& extra) {
    std::ostringstream os;
    os << "cmd=" << cmd << " seed=" << seed;
    if (!extra.empty()) os << " " << extra;
    return os.str();
}

std::string approx_echo(int k, const ApproxParams& p, uint64_t grid) {
    std::ostringstream os;
    os << "k=" << k << " grid=" << grid << " A=" << fmt_double(p.error_power)
       << " C=" << fmt_double(p.arc_exponent) << " eps_width=" << fmt_double(p.eps_width)
       << " tmax=" << p.t_max << " bump_r1=" << fmt_double(p.bump.plateau)
       << " bump_r2=" << fmt_double(p.bump.support);
    return os.str();
}

std::string iw_echo(const IWParams& p, uint64_t M) {
    std::ostringstream os;
    os << "C0=" << fmt_double(p.c0) << " rho=" << fmt_double(p.rho)
       << " rhoprime=" << fmt_double(p.rho_prime) << " M=" << M;
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"prime-kernel laboratory: exponential sums, major arcs, projections, norms"};
    app.require_subcommand(1);

    CommonOpts common;

    // ---- sieve ----
    uint64_t sieve_limit = 100;
    auto* cmd_sieve = app.add_subcommand("sieve", "prime table up to a limit");
    cmd_sieve->add_option("--limit", sieve_limit, "sieve limit (>= 2)")->required();
    add_common(cmd_sieve, common);

    // ---- expsum ----
    int k = 10;
    double alpha = 0.0;
    uint64_t grid_n = 0;
    auto* cmd_expsum = app.add_subcommand("expsum", "prime exponential sum, pointwise or grid");
    cmd_expsum->add_option("--k", k, "dyadic scale")->required()->check(CLI::Range(1, 24));
    cmd_expsum->add_option("--alpha", alpha, "evaluation point (pointwise mode)");
    cmd_expsum->add_option("--grid", grid_n, "grid size N (grid mode, power of two >= 2^(k+2))");
    add_common(cmd_expsum, common);

    // ---- varc ----
    auto* cmd_varc = app.add_subcommand("varc", "dyadic block profile V_k values");
    cmd_varc->add_option("--k", k, "dyadic scale")->required()->check(CLI::Range(1, 40));
    cmd_varc->add_option("--alpha", alpha, "evaluation point");
    cmd_varc->add_option("--grid", grid_n, "emit a CSV over j/N instead");
    add_common(cmd_varc, common);

    // ---- shared approximation knobs ----
    double opt_A = 2.0, opt_C = 3.0, eps_width = 0.1, c0 = 2.0;
    int tmax = -1;
    double bump_r1 = 0.25, bump_r2 = 0.5;
    auto add_approx = [&](CLI::App* cmd) {
        cmd->add_option("--A", opt_A, "target error power (reporting)");
        cmd->add_option("--C", opt_C, "chi arc-width exponent (default 3)");
        cmd->add_option("--eps-width", eps_width, "phi width exponent (default 0.1)");
        cmd->add_option("--tmax", tmax, "largest shell index (default floor(C0 log2 k))");
        cmd->add_option("--C0", c0, "frequency cutoff exponent (default 2)");
        cmd->add_option("--bump-r1", bump_r1, "bump plateau radius");
        cmd->add_option("--bump-r2", bump_r2, "bump support radius");
    };
    auto make_approx = [&](int kk) {
        ApproxParams p = ApproxParams::defaults(kk, c0);
        p.error_power = opt_A;
        p.arc_exponent = opt_C;
        p.eps_width = eps_width;
        p.bump = Bump(bump_r1, bump_r2);
        if (tmax >= 0) p.t_max = tmax;
        p.validate_for(kk);
        return p;
    };

    // ---- approx (error profile) ----
    auto* cmd_approx = app.add_subcommand("approx", "error profile E_k = K^ - L' on a grid");
    cmd_approx->add_option("--k", k, "dyadic scale")->required()->check(CLI::Range(1, 22));
    cmd_approx->add_option("--grid", grid_n, "grid size (default min(2^(k+2), 2^16))");
    add_approx(cmd_approx);
    add_common(cmd_approx, common);

    // ---- gap ----
    auto* cmd_gap = app.add_subcommand("gap", "measured sup of |L - L'| with per-shell rows");
    cmd_gap->add_option("--k", k, "dyadic scale")->required()->check(CLI::Range(1, 22));
    cmd_gap->add_option("--grid", grid_n, "uniform grid size (default 2^min(k+4,20))");
    add_approx(cmd_gap);
    add_common(cmd_gap, common);

    // ---- arcs ----
    int arc_t = 0;
    auto* cmd_arcs = app.add_subcommand("arcs", "disjointness check for one chi shell");
    cmd_arcs->add_option("--t", arc_t, "shell index")->required()->check(CLI::Range(0, 16));
    add_approx(cmd_arcs);
    add_common(cmd_arcs, common);

    // ---- iw ----
    double lp = 2.0, rho = 0.1, rho_prime = 0.5;
    int kmin = 4, kmax = 12, trials = 200;
    uint64_t model_m = uint64_t(1) << 14;
    auto* cmd_iw = app.add_subcommand("iw", "projection norm sweep over N = k^C0");
    cmd_iw->add_option("--p", lp, "Lebesgue exponent (> 1)")->required();
    cmd_iw->add_option("--kmin", kmin, "first scale")->check(CLI::Range(2, 24));
    cmd_iw->add_option("--kmax", kmax, "last scale")->check(CLI::Range(2, 24));
    cmd_iw->add_option("--C0", c0, "frequency cutoff exponent");
    cmd_iw->add_option("--rho", rho, "theorem-side radius exponent");
    cmd_iw->add_option("--rhoprime", rho_prime, "flow-side scale exponent");
    cmd_iw->add_option("--trials", trials, "trials per scale");
    cmd_iw->add_option("--M", model_m, "cyclic model size (power of two)");
    add_common(cmd_iw, common);

    // ---- norms ----
    double pprime = 0.0, delta = 1e-3;
    int iters = 50;
    auto* cmd_norms = app.add_subcommand("norms", "endpoint + certified + searched norms");
    cmd_norms->add_option("--k", k, "dyadic scale")->required()->check(CLI::Range(1, 20));
    cmd_norms->add_option("--p", lp, "source exponent");
    cmd_norms->add_option("--pprime", pprime, "target exponent (default conjugate of p)");
    cmd_norms->add_option("--delta", delta, "certified bracket width");
    cmd_norms->add_option("--iters", iters, "ascent iterations");
    add_common(cmd_norms, common);

    // ---- weaktype ----
    double eps_loss = 0.1;
    std::string family = "random";
    auto* cmd_weak = app.add_subcommand("weaktype", "restricted weak-type constants");
    cmd_weak->add_option("--k", k, "dyadic scale")->required()->check(CLI::Range(2, 18));
    cmd_weak->add_option("--eps-loss", eps_loss, "weak-type loss exponent");
    cmd_weak->add_option("--trials", trials, "number of sampled (F, G) pairs");
    cmd_weak->add_option("--family", family, "random | interval | primes-shifted")
        ->check(CLI::IsMember({"random", "interval", "primes-shifted"}));
    add_common(cmd_weak, common);

    // ---- decay ----
    auto* cmd_decay = app.add_subcommand("decay", "per-scale norm decay table");
    cmd_decay->add_option("--kmin", kmin, "first scale")->required()->check(CLI::Range(1, 20));
    cmd_decay->add_option("--kmax", kmax, "last scale")->required()->check(CLI::Range(1, 20));
    cmd_decay->add_option("--p", lp, "source exponent")->required();
    cmd_decay->add_option("--pprime", pprime, "target exponent (default conjugate of p)");
    cmd_decay->add_option("--eps-loss", eps_loss, "loss in the predicted exponent");
    cmd_decay->add_option("--delta", delta, "certified bracket width");
    cmd_decay->add_option("--iters", iters, "ascent iterations");
    add_common(cmd_decay, common);

    // ---- tlambda ----
    double lambda = 0.9;
    int pexp_min = 4, pexp_max = 10;
    auto* cmd_tl = app.add_subcommand("tlambda", "truncated fractional operator study");
    cmd_tl->add_option("--lambda", lambda, "fractional exponent in (0, 1]")->required();
    cmd_tl->add_option("--p", lp, "source exponent")->required();
    cmd_tl->add_option("--pprime", pprime, "target exponent")->required();
    cmd_tl->add_option("--pmin", pexp_min, "smallest truncation exponent (P = 2^e)")
        ->check(CLI::Range(1, 16));
    cmd_tl->add_option("--pmax", pexp_max, "largest truncation exponent")
        ->check(CLI::Range(1, 16));
    cmd_tl->add_option("--delta", delta, "certified bracket width");
    cmd_tl->add_option("--iters", iters, "ascent iterations");
    add_common(cmd_tl, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        if (*cmd_sieve) {
            auto table = nt::sieve_primes(sieve_limit);
            CsvWriter csv(common.out.stream());
            csv.metadata(echo_params("sieve", common.seed, "limit=" + std::to_string(sieve_limit)));
            csv.header("index,prime,logweight");
            for (size_t i = 0; i < table.primes.size(); ++i) {
                csv.field(static_cast<uint64_t>(i)).field(table.primes[i]).field(table.logweights[i]);
                csv.end_row();
            }
            std::cout << table.primes.size() << " primes <= " << sieve_limit << "\n";
        } else if (*cmd_expsum) {
            auto kernel = build_kernel(k);
            if (grid_n > 0) {
                auto grid = kernel_fourier_grid(kernel, grid_n);
                std::ostringstream extra;
                extra << "k=" << k << " grid=" << grid_n;
                grid.write_csv(common.out.stream(), echo_params("expsum", common.seed, extra.str()));
            } else {
                auto v = kernel_fourier(kernel, alpha);
                std::cout << "alpha=" << fmt_double(alpha) << " re=" << fmt_double(v.real())
                          << " im=" << fmt_double(v.imag()) << " abs=" << fmt_double(std::abs(v))
                          << "\n";
            }
        } else if (*cmd_varc) {
            if (grid_n > 0) {
                CsvWriter csv(common.out.stream());
                std::ostringstream extra;
                extra << "k=" << k << " grid=" << grid_n;
                csv.metadata(echo_params("varc", common.seed, extra.str()));
                csv.header("alpha,re,im,abs");
                for (uint64_t j = 0; j < grid_n; ++j) {
                    double a = static_cast<double>(j) / static_cast<double>(grid_n);
                    auto v = eval_V(k, a);
                    csv.field(a).field(v.real()).field(v.imag()).field(std::abs(v));
                    csv.end_row();
                }
            } else {
                auto v = eval_V(k, alpha);
                std::cout << "alpha=" << fmt_double(alpha) << " re=" << fmt_double(v.real())
                          << " im=" << fmt_double(v.imag()) << " abs=" << fmt_double(std::abs(v))
                          << "\n";
            }
        } else if (*cmd_approx) {
            ApproxParams params = make_approx(k);
            uint64_t n = grid_n ? grid_n : std::min(uint64_t(1) << (k + 2), uint64_t(1) << 16);
            auto kernel = build_kernel(k);
            auto profile = error_profile(kernel, params, n);
            MajorArcEvaluator eval(k, params);
            profile.write_csv(common.out.stream(),
                              echo_params("approx", common.seed, approx_echo(k, params, n)),
                              eval);
            std::cout << "sup=" << fmt_double(profile.sup)
                      << " at alpha=" << fmt_double(profile.sup_alpha) << "\n";
        } else if (*cmd_gap) {
            ApproxParams params = make_approx(k);
            auto report = lemma_gap_sup(k, params, grid_n);
            MajorArcEvaluator eval(k, params);
            CsvWriter csv(common.out.stream());
            csv.metadata(echo_params("gap", common.seed, approx_echo(k, params, report.uniform_grid)));
            csv.header("alpha,re,im,abs,nearest_fraction_a,nearest_fraction_q");
            for (const auto& s : report.top_samples) {
                auto f = eval.nearest_fraction(s.alpha);
                csv.field(s.alpha)
                    .field(s.value.real())
                    .field(s.value.imag())
                    .field(std::abs(s.value))
                    .field(f.a)
                    .field(f.q);
                csv.end_row();
            }
            std::cout << "sup=" << fmt_double(report.sup)
                      << " at alpha=" << fmt_double(report.sup_alpha) << "\n";
            for (size_t t = 0; t < report.per_shell_sup.size(); ++t)
                std::cout << "shell t=" << t << " sup=" << fmt_double(report.per_shell_sup[t])
                          << "\n";
        } else if (*cmd_arcs) {
            ApproxParams params = ApproxParams::defaults(20, c0);
            params.arc_exponent = opt_C;
            params.eps_width = eps_width;
            params.bump = Bump(bump_r1, bump_r2);
            if (tmax >= 0) params.t_max = tmax;
            auto report = disjointness_check(arc_t, params);
            std::cout << "t=" << arc_t << " fractions=" << report.fraction_count
                      << " disjoint=" << (report.disjoint ? "yes" : "no")
                      << " min_gap=" << fmt_double(report.min_gap) << " pair=" << report.first.a
                      << "/" << report.first.q << "," << report.second.a << "/" << report.second.q
                      << "\n";
        } else if (*cmd_iw) {
            if (kmax < kmin) throw CLI::ValidationError("--kmax must be >= --kmin");
            IWParams params;
            params.c0 = c0;
            params.rho = rho;
            params.rho_prime = rho_prime;
            CsvWriter csv(common.out.stream());
            std::ostringstream extra;
            extra << "p=" << fmt_double(lp) << " kmin=" << kmin << " kmax=" << kmax
                  << " trials=" << trials << " " << iw_echo(params, model_m);
            csv.metadata(echo_params("iw", common.seed, extra.str()));
            csv.header("N,p,trials,best_ratio,log_N,ratio_over_logN");
            for (int kk = kmin; kk <= kmax; ++kk) {
                params.k = kk;
                auto freqs = build_freq_set(params.freq_limit(), params.rho);
                auto mult = ArcMultiplier::build(freqs, params, Bump{}, model_m);
                auto probe =
                    measure_projection_norm(lp, mult, trials, derive_seed(common.seed, kk));
                double logn = std::log(static_cast<double>(freqs.N));
                csv.field(freqs.N)
                    .field(lp)
                    .field(static_cast<uint64_t>(trials))
                    .field(probe.best_ratio)
                    .field(logn)
                    .field(probe.best_ratio / logn);
                csv.end_row();
            }
        } else if (*cmd_norms) {
            if (pprime <= 1.0) pprime = conjugate_exponent(lp);
            auto report = norm_report(k, lp, pprime, delta, iters, common.seed);
            CsvWriter csv(common.out.stream());
            std::ostringstream extra;
            extra << "k=" << k << " p=" << fmt_double(lp) << " pprime=" << fmt_double(pprime)
                  << " delta=" << fmt_double(delta) << " iters=" << iters;
            csv.metadata(echo_params("norms", common.seed, extra.str()));
            csv.header("k,a1_exact,a2_lo,a2_hi,grid_max,power_iteration,interpolated,"
                       "embed_factor,searched");
            csv.field(report.k)
                .field(report.a1_exact)
                .field(report.a2.lo)
                .field(report.a2.hi)
                .field(report.grid_max)
                .field(report.power_iteration)
                .field(report.interpolated)
                .field(report.embed_factor)
                .field(report.searched);
            csv.end_row();
            std::cout << "a1=" << fmt_double(report.a1_exact) << " a2=["
                      << fmt_double(report.a2.lo) << "," << fmt_double(report.a2.hi)
                      << "] power_iteration=" << fmt_double(report.power_iteration)
                      << " searched=" << fmt_double(report.searched) << "\n";
        } else if (*cmd_weak) {
            SetFamily fam = family == "random" ? SetFamily::random
                            : family == "interval" ? SetFamily::interval
                                                   : SetFamily::primes_shifted;
            auto kernel = build_kernel(k);
            auto report = weak_type_sweep(kernel, eps_loss, trials, common.seed, fam);
            CsvWriter csv(common.out.stream());
            std::ostringstream extra;
            extra << "k=" << k << " M=" << (uint64_t(1) << (k + 2))
                  << " eps_loss=" << fmt_double(eps_loss) << " trials=" << trials
                  << " family=" << family;
            csv.metadata(echo_params("weaktype", common.seed, extra.str()));
            csv.header("k,trial,family,size_f,size_g,constant");
            for (const auto& row : report.rows) {
                csv.field(k)
                    .field(row.trial)
                    .field(family)
                    .field(row.size_f)
                    .field(row.size_g)
                    .field(row.constant);
                csv.end_row();
            }
            std::cout << "max_constant=" << fmt_double(report.max_constant) << "\n";
        } else if (*cmd_decay) {
            if (kmax < kmin) throw CLI::ValidationError("--kmax must be >= --kmin");
            if (pprime <= 1.0) pprime = conjugate_exponent(lp);
            auto study = decay_study(kmin, kmax, lp, pprime, eps_loss, delta, iters, common.seed);
            std::ostringstream extra;
            extra << "kmin=" << kmin << " kmax=" << kmax << " p=" << fmt_double(lp)
                  << " pprime=" << fmt_double(pprime) << " eps_loss=" << fmt_double(eps_loss)
                  << " delta=" << fmt_double(delta) << " iters=" << iters;
            study.write_csv(common.out.stream(), echo_params("decay", common.seed, extra.str()));
            std::cout << "slope_interpolated=" << fmt_double(study.slope_interpolated)
                      << " slope_searched=" << fmt_double(study.slope_searched)
                      << " slope_predicted=" << fmt_double(study.slope_predicted) << "\n";
        } else if (*cmd_tl) {
            if (pexp_max < pexp_min) throw CLI::ValidationError("--pmax must be >= --pmin");
            std::vector<uint64_t> truncations;
            for (int e = pexp_min; e <= pexp_max; e += 2)
                truncations.push_back(uint64_t(1) << e);
            auto study =
                t_lambda_study(lambda, lp, pprime, truncations, delta, iters, common.seed);
            std::ostringstream extra;
            extra << "lambda=" << fmt_double(lambda) << " p=" << fmt_double(lp)
                  << " pprime=" << fmt_double(pprime) << " pmin=" << pexp_min
                  << " pmax=" << pexp_max << " iters=" << iters;
            study.write_csv(common.out.stream(), echo_params("tlambda", common.seed, extra.str()));
            std::cout << "admissible=" << (study.admissible ? "yes" : "no") << " last_upper="
                      << fmt_double(study.rows.back().upper_partial_sum) << "\n";
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "model rejection: " << e.what() << "\n";
        return 3;
    } catch (const ResourceError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
