#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "idtsim/core.hpp"
#include "idtsim/families.hpp"
#include "idtsim/idt_model.hpp"
#include "idtsim/infdiv.hpp"
#include "idtsim/maxstable.hpp"
#include "idtsim/rng.hpp"
#include "idtsim/samplers.hpp"

namespace idtsim {

struct BernsteinEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

// Psi_hat(x) = -log( (1/n) sum_i exp(-x s_i) ) with delta-method standard
// errors; samples equal to +inf contribute 0 to the mean. Throws
// AllInfinite when every sample is infinite.
inline std::vector<BernsteinEstimate> empirical_bernstein(
    const std::vector<double>& samples, const std::vector<double>& xs) {
    if (samples.empty())
        throw std::invalid_argument("empirical_bernstein: empty sample set");
    bool any_finite = false;
    for (double s : samples)
        if (!std::isinf(s)) {
            any_finite = true;
            break;
        }
    if (!any_finite)
        throw AllInfinite("empirical_bernstein: every sample is infinite");
    const double n = static_cast<double>(samples.size());
    std::vector<BernsteinEstimate> out;
    out.reserve(xs.size());
    for (double x : xs) {
        double sum = 0.0, sumsq = 0.0;
        for (double s : samples) {
            const double v = std::isinf(s) ? 0.0 : std::exp(-x * s);
            sum += v;
            sumsq += v * v;
        }
        const double mean = sum / n;
        BernsteinEstimate e;
        if (mean <= 0.0) {
            e.estimate = kInf;
            e.std_error = kInf;
        } else {
            e.estimate = -std::log(mean);
            const double var = std::max(sumsq / n - mean * mean, 0.0);
            e.std_error = std::sqrt(var / n) / mean;
        }
        out.push_back(e);
    }
    return out;
}

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

namespace detail {

inline double kolmogorov_q(double lambda) {
    if (lambda < 1e-8) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
        sum += term;
        sign = -sign;
        if (std::abs(term) < 1e-12 * std::abs(sum)) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

inline double ks_p_value(double d, double n_eff) {
    const double s = std::sqrt(n_eff);
    return kolmogorov_q((s + 0.12 + 0.11 / s) * d);
}

}  // namespace detail

inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("ks_two_sample: empty input");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double xa = a[i], xb = b[j];
        if (xa <= xb) ++i;
        if (xb <= xa) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    KsResult r{d, detail::ks_p_value(d, na * nb / (na + nb))};
    return r;
}

inline KsResult ks_uniform(std::vector<double> u) {
    if (u.empty()) throw std::invalid_argument("ks_uniform: empty input");
    std::sort(u.begin(), u.end());
    const double n = static_cast<double>(u.size());
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        d = std::max(d, (i + 1) / n - u[i]);
        d = std::max(d, u[i] - i / n);
    }
    return {d, detail::ks_p_value(d, n)};
}

struct RateTestResult {
    double z_score = 0.0;
    bool pass = true;
};

// Compares the sample mean against 1/rate with a normal z-score.
inline RateTestResult exp_rate_test(const std::vector<double>& samples, double rate) {
    if (samples.empty()) throw std::invalid_argument("exp_rate_test: empty input");
    const double n = static_cast<double>(samples.size());
    double sum = 0.0, sumsq = 0.0;
    for (double s : samples) {
        sum += s;
        sumsq += s * s;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(std::max(sumsq / n - mean * mean, 1e-300));
    const double z = (mean - 1.0 / rate) / (sd / std::sqrt(n));
    return {z, std::abs(z) < 3.0};
}

// --- suite ------------------------------------------------------------------

struct CheckResult {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    bool stochastic = true;  // MC checks tolerate a 5% failure budget
    std::string oracle;
};

struct VerificationReport {
    std::string model_id;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;
    bool overall_pass = false;

    void finalize() {
        std::uint64_t mc_total = 0, mc_pass = 0;
        bool closed_ok = true;
        for (const auto& c : checks) {
            if (c.stochastic) {
                ++mc_total;
                if (c.pass) ++mc_pass;
            } else if (!c.pass) {
                closed_ok = false;
            }
        }
        const double frac = mc_total == 0 ? 1.0
                                          : static_cast<double>(mc_pass) /
                                                static_cast<double>(mc_total);
        overall_pass = closed_ok && frac >= 0.95;
    }
};

inline std::string report_to_json(const VerificationReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "{\n  \"model_id\": \"" << r.model_id << "\",\n  \"seed\": " << r.seed
       << ",\n  \"overall_pass\": " << (r.overall_pass ? "true" : "false")
       << ",\n  \"checks\": [\n";
    for (std::size_t i = 0; i < r.checks.size(); ++i) {
        const auto& c = r.checks[i];
        os << "    {\"name\": \"" << c.name << "\", \"statistic\": " << c.statistic
           << ", \"threshold\": " << c.threshold
           << ", \"pass\": " << (c.pass ? "true" : "false") << ", \"n\": " << c.n
           << ", \"seed\": " << c.seed << ", \"stochastic\": "
           << (c.stochastic ? "true" : "false") << ", \"oracle\": \"" << c.oracle
           << "\"}" << (i + 1 == r.checks.size() ? "" : ",") << "\n";
    }
    os << "  ]\n}\n";
    return os.str();
}

inline std::string report_to_csv(const VerificationReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "check,statistic,threshold,pass,n,seed\n";
    for (const auto& c : r.checks) {
        os << c.name << "," << c.statistic << "," << c.threshold << ","
           << (c.pass ? 1 : 0) << "," << c.n << "," << c.seed << "\n";
    }
    return os.str();
}

struct SuiteConfig {
    std::uint64_t n = 100000;
    std::uint64_t seed = 1;
    double series_tol = 1e-4;
    double path_tol = 1e-6;
    std::vector<int> dims = {2, 3};
};

namespace detail {

// H_1 samples through the sampler suited to the family: Bondesson series
// for the Stieltjes families, the direct construction for compound Poisson
// models, the truncated series otherwise.
inline std::vector<double> sample_h1_batch(const std::string& family_id,
                                           const ParamMap& params, const IdtModel& m,
                                           std::uint64_t n, RngStream rng,
                                           const SuiteConfig& cfg) {
    std::vector<double> out(n);
    if (family_id.rfind("bondesson-", 0) == 0) {
        StieltjesMeasure rho;
        const double theta = param_or(params, "theta", 1.0);
        if (family_id == "bondesson-45") rho = bondesson_45().rho;
        else if (family_id == "bondesson-5") rho = bondesson_5(theta).rho;
        else if (family_id == "bondesson-33") rho = bondesson_33(theta).rho;
        else rho = bondesson_64(theta).rho;
        for (std::uint64_t i = 0; i < n; ++i) {
            RngStream sub = rng.substream(i);
            out[i] = sample_bondesson(rho, sub, cfg.series_tol).value;
        }
        return out;
    }
    const bool direct = is_compound_poisson(m);
    for (std::uint64_t i = 0; i < n; ++i) {
        RngStream sub = rng.substream(i);
        out[i] = direct ? sample_H_direct(m, 1.0, sub)(1.0)
                        : sample_H_lepage(m, 1.0, sub, cfg.path_tol)(1.0);
    }
    return out;
}

inline void add_check(VerificationReport& rep, std::string name, double statistic,
                      double threshold, bool pass, std::uint64_t n,
                      std::uint64_t seed, bool stochastic, std::string oracle) {
    rep.checks.push_back({std::move(name), statistic, threshold, pass, n, seed,
                          stochastic, std::move(oracle)});
}

}  // namespace detail

// Runs the applicable statistical checks for one catalog family and returns
// a machine-readable report. Fully seeded: identical (family, config) give
// identical reports.
inline VerificationReport run_suite(const std::string& family_id,
                                    const ParamMap& params, const SuiteConfig& cfg) {
    VerificationReport rep;
    rep.model_id = family_id;
    rep.seed = cfg.seed;
    RngStream root(cfg.seed);
    std::uint64_t check_idx = 0;

    IdtModel model = make_family_model(family_id, params);

    // Closed form of Psi_H against the generic quadrature.
    if (model.psi_H_closed) {
        double worst = 0.0;
        for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
            const double closed = model.psi_H_closed(x);
            const double quad = psi_H_quadrature(model.F, model.L, x, 1e-10);
            worst = std::max(worst, std::abs(closed - quad) / std::max(1e-12, quad));
        }
        detail::add_check(rep, "psi-closed-vs-quadrature", worst, 1e-6, worst < 1e-6,
                          5, cfg.seed, false, "quadrature");
        ++check_idx;
    }

    // ell(1,...,1) = Psi_H(d).
    {
        double worst = 0.0;
        for (int d : {2, 3, 5}) {
            const std::vector<double> ones(static_cast<std::size_t>(d), 1.0);
            const double lhs = ell_quadrature(model.F, model.L, ones, 1e-9);
            const double rhs = psi_H(model, static_cast<double>(d));
            worst = std::max(worst, std::abs(lhs - rhs) / rhs);
        }
        detail::add_check(rep, "ell-ones-equals-psi", worst, 1e-6, worst < 1e-6, 3,
                          cfg.seed, false, "dual quadrature routes");
        ++check_idx;
    }

    // Empirical Bernstein function of H_1 at x = 1..20 within 3 standard
    // errors (absolute floor 0.02).
    const bool can_sample_h1 = family_id.rfind("bondesson-", 0) == 0 ||
                               is_compound_poisson(model) ||
                               family_id == "galambos";
    if (can_sample_h1) {
        const std::vector<double> samples = detail::sample_h1_batch(
            family_id, params, model, cfg.n, root.substream(check_idx), cfg);
        std::vector<double> xs(20);
        for (int i = 0; i < 20; ++i) xs[static_cast<std::size_t>(i)] = i + 1.0;
        const auto est = empirical_bernstein(samples, xs);
        int fails = 0;
        double worst_z = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double truth = psi_H(model, xs[i]);
            const double band = std::max(3.0 * est[i].std_error, 0.02);
            const double dev = std::abs(est[i].estimate - truth);
            worst_z = std::max(worst_z, dev / band);
            if (dev > band) ++fails;
        }
        detail::add_check(rep, "bernstein-curve-x1-20", worst_z, 1.0, fails <= 1,
                          cfg.n, cfg.seed, true, "theoretical Psi_H");
        ++check_idx;
    }

    // Copula checks need a normalized model with exact Z and M samplers.
    const bool copula_ready = family_id == "levy-bernoulli" ||
                              family_id == "german-linear" ||
                              family_id == "german-exp" || family_id == "frechet" ||
                              family_id == "galambos" ||
                              family_id.rfind("molchanov", 0) == 0;
    if (copula_ready) {
        IdtModel norm = make_family_model(family_id, params,
                                          LevyChoice::family_default, true);
        for (int d : cfg.dims) {
            RngStream rng = root.substream(check_idx);
            const std::uint64_t n = cfg.n;
            std::vector<std::vector<double>> margins(
                static_cast<std::size_t>(d), std::vector<double>(n));
            std::vector<double> qmean(static_cast<std::size_t>(d), 0.0);
            for (std::uint64_t i = 0; i < n; ++i) {
                RngStream sub = rng.substream(i);
                const auto u = sample_copula(norm, d, sub);
                for (int j = 0; j < d; ++j)
                    margins[static_cast<std::size_t>(j)][i] =
                        u[static_cast<std::size_t>(j)];
                const auto q = sample_Q(norm, d, sub);
                for (int j = 0; j < d; ++j)
                    qmean[static_cast<std::size_t>(j)] += q.q[static_cast<std::size_t>(j)];
            }
            double min_p = 1.0;
            for (int j = 0; j < d; ++j)
                min_p = std::min(
                    min_p, ks_uniform(margins[static_cast<std::size_t>(j)]).p_value);
            detail::add_check(rep, "copula-margins-ks-d" + std::to_string(d), min_p,
                              0.01, min_p > 0.01, n, cfg.seed, true,
                              "uniform margins");
            double worst_z = 0.0;
            const double se = std::sqrt(1.0 / (static_cast<double>(d) *
                                               static_cast<double>(d)) /
                                        static_cast<double>(n));
            for (int j = 0; j < d; ++j) {
                const double mean = qmean[static_cast<std::size_t>(j)] /
                                    static_cast<double>(n);
                worst_z = std::max(worst_z, std::abs(mean - 1.0 / d) / se);
            }
            detail::add_check(rep, "pickands-mean-d" + std::to_string(d), worst_z,
                              3.5, worst_z < 3.5, n, cfg.seed, true,
                              "E[Q_k] = 1/d");
            ++check_idx;
        }
        // Expected stopping index of the copula sampler.
        {
            const int d = cfg.dims.empty() ? 2 : cfg.dims.front();
            RngStream rng = root.substream(check_idx);
            const std::uint64_t n = std::min<std::uint64_t>(cfg.n, 10000);
            double mean = 0.0;
            for (std::uint64_t i = 0; i < n; ++i) {
                RngStream sub = rng.substream(i);
                std::uint64_t idx = 0;
                sample_copula_counted(norm, d, sub, &idx);
                mean += static_cast<double>(idx);
            }
            mean /= static_cast<double>(n);
            const double formula = expected_stopping(norm, d);
            const double rel = std::abs(mean - formula) / formula;
            detail::add_check(rep, "stopping-index-mean-d" + std::to_string(d), rel,
                              0.05, rel < 0.05 && formula <= double(d) * d, n,
                              cfg.seed, true, "alternating binomial formula");
            ++check_idx;
        }
    }

    rep.finalize();
    return rep;
}

}  // namespace idtsim
