#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "idtsim/bernstein.hpp"
#include "idtsim/core.hpp"
#include "idtsim/idt_model.hpp"
#include "idtsim/numerics.hpp"

namespace idtsim {

using ParamMap = std::map<std::string, double>;

enum class LevyChoice { family_default, standard_poisson, unit_exp_cp };

struct FamilySpec {
    std::string id;
    std::string summary;
    std::vector<std::string> params;
    bool fixed_L = false;  // family pins its subordinator
    std::function<IdtModel(const ParamMap&, LevyChoice, bool)> build;
};

// --- stock subordinators ----------------------------------------------------

// L = N, the unit-intensity Poisson process: nu = delta_1, Psi(x) = 1-e^-x.
inline BernsteinFunction standard_poisson_subordinator() {
    LevyMeasure nu;
    nu.survival = [](double t) { return t < 1.0 ? 1.0 : 0.0; };
    nu.survival_inverse = [](double y) { return y < 1.0 ? 1.0 : 0.0; };
    nu.survival_inverse_left = [](double y) { return y <= 1.0 ? 1.0 : 0.0; };
    nu.atom_at_infinity = 0.0;
    nu.total_mass = 1.0;
    nu.jump_mean = 1.0;
    nu.support_lower = 1.0;
    return make_bernstein_from_levy(std::move(nu),
                                    [](double x) { return -std::expm1(-x); });
}

// Compound Poisson, unit intensity, unit-exponential jumps: Psi(x) = x/(x+1).
inline BernsteinFunction unit_exp_cp_subordinator() {
    LevyMeasure nu;
    nu.survival = [](double t) { return std::exp(-t); };
    nu.survival_inverse = [](double y) { return y >= 1.0 ? 0.0 : -std::log(y); };
    nu.survival_inverse_left = nu.survival_inverse;
    nu.atom_at_infinity = 0.0;
    nu.total_mass = 1.0;
    nu.jump_mean = 1.0;
    nu.support_lower = 0.0;
    return make_bernstein_from_levy(std::move(nu),
                                    [](double x) { return x / (x + 1.0); });
}

// --- distribution families --------------------------------------------------

// F(x) = e^{-1} + (1-e^{-1}) 1[1,inf)(x): the pair (F, L) reproduces H = L.
inline DistributionF levy_bernoulli_F() {
    const double p = std::exp(-1.0);
    DistributionF f;
    f.cdf = [p](double x) { return x < 0.0 ? 0.0 : (x < 1.0 ? p : 1.0); };
    f.cdf_left = [p](double x) { return x <= 0.0 ? 0.0 : (x <= 1.0 ? p : 1.0); };
    f.inverse = [p](double y) { return y <= p ? 0.0 : 1.0; };
    f.mean = 1.0 - p;
    f.left_support = 0.0;
    f.right_support = 1.0;
    f.psi = [](double x) { return std::isinf(x) ? 1.0 : -std::expm1(-x); };
    f.neg_log_tail = [](double x) { return x < 1.0 ? 1.0 - std::max(x, 0.0) : 0.0; };
    f.inv_exp_neg = [](double t) { return t < 1.0 ? 1.0 : 0.0; };
    f.neg_log_cdf = [](double s) { return s < 0.0 ? kInf : (s < 1.0 ? 1.0 : 0.0); };
    f.power_sampler = [](double z, RngStream& rng) {
        return rng.uniform() <= std::exp(-z) ? 0.0 : 1.0;
    };
    f.m_sampler = [](double, RngStream&) { return 1.0; };
    return f;
}

// F(x) = min{x, 1}: Psi_F(y) = y/(y+1).
inline DistributionF german_linear_F() {
    DistributionF f;
    f.cdf = [](double x) { return std::min(std::max(x, 0.0), 1.0); };
    f.cdf_left = f.cdf;
    f.inverse = [](double y) { return std::min(y, 1.0); };
    f.mean = 0.5;
    f.left_support = 0.0;
    f.right_support = 1.0;
    f.psi = [](double y) { return std::isinf(y) ? 1.0 : y / (y + 1.0); };
    f.neg_log_tail = [](double x) {
        if (x >= 1.0) return 0.0;
        if (x <= 0.0) return 1.0;
        return 1.0 - x + x * std::log(x);
    };
    f.inv_exp_neg = [](double t) { return std::exp(-t); };
    f.neg_log_cdf = [](double s) {
        if (s >= 1.0) return 0.0;
        return s <= 0.0 ? kInf : -std::log(s);
    };
    f.power_sampler = [](double z, RngStream& rng) {
        return std::exp(std::log(rng.uniform()) / z);
    };
    // x dF^z(x) has cdf min{x^(z+1), 1}.
    f.m_sampler = [](double z, RngStream& rng) {
        return std::exp(std::log(rng.uniform()) / (z + 1.0));
    };
    return f;
}

// F(x) = min{exp(x-1), 1}: Psi_F(y) = 1 - (1-e^-y)/y.
inline DistributionF german_exp_F() {
    DistributionF f;
    f.cdf = [](double x) {
        return x < 0.0 ? 0.0 : std::min(std::exp(x - 1.0), 1.0);
    };
    f.cdf_left = [](double x) {
        return x <= 0.0 ? 0.0 : std::min(std::exp(x - 1.0), 1.0);
    };
    const double p0 = std::exp(-1.0);
    f.inverse = [p0](double y) { return y <= p0 ? 0.0 : 1.0 + std::log(y); };
    f.mean = p0;
    f.left_support = 0.0;
    f.right_support = 1.0;
    f.psi = [](double y) {
        if (std::isinf(y)) return 1.0;
        if (y < 1e-4) return y / 2.0 - y * y / 6.0 + y * y * y / 24.0;
        return 1.0 + std::expm1(-y) / y;
    };
    f.neg_log_tail = [](double x) {
        if (x >= 1.0) return 0.0;
        const double r = 1.0 - std::max(x, 0.0);
        return 0.5 * r * r;
    };
    f.inv_exp_neg = [](double t) { return std::max(1.0 - t, 0.0); };
    f.neg_log_cdf = [](double s) {
        return s < 0.0 ? kInf : std::max(1.0 - s, 0.0);
    };
    f.power_sampler = [](double z, RngStream& rng) {
        return std::max(0.0, 1.0 + std::log(rng.uniform()) / z);
    };
    // Density of M is proportional to x e^{xz} on (0,1); bounded, so
    // accept-reject against the uniform proposal.
    f.m_sampler = [](double z, RngStream& rng) {
        for (;;) {
            const double x = rng.uniform();
            if (rng.uniform() <= x * std::exp(z * (x - 1.0))) return x;
        }
    };
    return f;
}

// Frechet: F(x) = exp(-c x^{-1/theta}) with c = Gamma(1-theta)^{-1/theta},
// so that Psi_F(x) = x^theta.
inline DistributionF frechet_F(double theta) {
    if (!(theta > 0.0) || !(theta < 1.0))
        throw std::invalid_argument("frechet: theta must lie in (0,1)");
    const double c = std::exp(-std::lgamma(1.0 - theta) / theta);
    DistributionF f;
    f.cdf = [c, theta](double x) {
        return x <= 0.0 ? 0.0 : std::exp(-c * std::pow(x, -1.0 / theta));
    };
    f.cdf_left = f.cdf;
    f.inverse = [c, theta](double y) {
        if (y >= 1.0) return kInf;
        return std::pow(c / (-std::log(y)), theta);
    };
    f.mean = 1.0;
    f.left_support = 0.0;
    f.right_support = kInf;
    f.psi = [theta](double x) { return std::pow(x, theta); };
    f.neg_log_tail = [c, theta](double x) {
        return c * theta / (1.0 - theta) * std::pow(x, -(1.0 - theta) / theta);
    };
    f.inv_exp_neg = [c, theta](double t) {
        return std::pow(c, theta) * std::pow(t, -theta);
    };
    f.neg_log_cdf = [c, theta](double s) {
        return s <= 0.0 ? kInf : c * std::pow(s, -1.0 / theta);
    };
    f.power_sampler = [c, theta](double z, RngStream& rng) {
        return std::pow(z * c / rng.exponential(), theta);
    };
    // Size-biased law: M = (z c)^theta W^{-theta}, W ~ Gamma(1-theta).
    f.m_sampler = [c, theta](double z, RngStream& rng) {
        return std::pow(z * c / rng.gamma(1.0 - theta), theta);
    };
    return f;
}

// F(x) = 1 - exp(-x) (paired with L = N: the Galambos dependence structure).
inline DistributionF galambos_F() {
    DistributionF f;
    f.cdf = [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); };
    f.cdf_left = f.cdf;
    f.inverse = [](double y) { return -std::log1p(-std::min(y, 1.0)); };
    f.mean = 1.0;
    f.left_support = 0.0;
    f.right_support = kInf;
    f.neg_log_tail = [](double x) { return dilog_exp_neg(std::max(x, 0.0)); };
    f.inv_exp_neg = [](double t) { return -std::log1p(-std::exp(-t)); };
    f.neg_log_cdf = [](double s) {
        return s <= 0.0 ? kInf : -std::log(-std::expm1(-s));
    };
    f.power_sampler = [](double z, RngStream& rng) {
        return -std::log1p(-std::exp(std::log(rng.uniform()) / z));
    };
    // With L = N only z = 1 arises; x dF(x) / Psi_F(1) = x e^{-x} dx.
    f.m_sampler = [](double z, RngStream& rng) {
        if (std::abs(z - 1.0) > 1e-9)
            throw MSamplerUnavailable("galambos: M sampler only at z = 1");
        return rng.exponential() + rng.exponential();
    };
    return f;
}

// Step distribution whose left limits equal exp(-floor(1/x));
// Psi_F(x) = (e^x - 1)(-log(1 - e^{-x})).
inline DistributionF molchanov_floor_F() {
    DistributionF f;
    f.cdf = [](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return std::exp(1.0 - std::ceil(1.0 / x));
    };
    f.cdf_left = [](double x) {
        if (x <= 0.0) return 0.0;
        if (x > 1.0) return 1.0;
        return std::exp(-std::floor(1.0 / x));
    };
    f.inverse = [](double y) {
        if (y >= 1.0) return 1.0;
        return 1.0 / (std::floor(-std::log(y)) + 1.0);
    };
    f.mean = (std::exp(1.0) - 1.0) * (-std::log(-std::expm1(-1.0)));
    f.left_support = 0.0;
    f.right_support = 1.0;
    f.psi = [](double x) {
        if (x == 0.0) return 0.0;
        if (std::isinf(x)) return 1.0;
        if (x > 30.0) return 1.0 - 0.5 * std::exp(-x);
        return std::expm1(x) * (-std::log(-std::expm1(-x)));
    };
    f.neg_log_tail = [](double x) {
        if (x >= 1.0) return 0.0;
        x = std::max(x, 1e-12);
        const double k = std::floor(1.0 / x);
        double harmonic = 0.0;
        if (k <= 1e6) {
            for (double i = 1.0; i <= k; ++i) harmonic += 1.0 / i;
        } else {
            harmonic = std::log(k) + 0.57721566490153286 + 0.5 / k;
        }
        return harmonic - k * x;
    };
    f.inv_exp_neg = [](double t) { return 1.0 / (std::floor(t) + 1.0); };
    f.neg_log_cdf = [](double s) {
        if (s >= 1.0) return 0.0;
        if (s <= 0.0) return kInf;
        return std::ceil(1.0 / s) - 1.0;
    };
    return f;
}

// F(x) = min{1, exp(1 - 1/x)}; Psi_F(x) = x e^x E1(x).
inline DistributionF molchanov_exp_F() {
    DistributionF f;
    f.cdf = [](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return std::exp(1.0 - 1.0 / x);
    };
    f.cdf_left = f.cdf;
    f.inverse = [](double y) { return y >= 1.0 ? 1.0 : 1.0 / (1.0 - std::log(y)); };
    f.mean = std::expm1(1.0) - 0.0;  // placeholder, fixed below
    f.left_support = 0.0;
    f.right_support = 1.0;
    f.psi = [](double x) {
        if (x == 0.0) return 0.0;
        if (std::isinf(x)) return 1.0;
        return x * expint_e1_scaled(x);
    };
    f.neg_log_tail = [](double x) {
        if (x >= 1.0) return 0.0;
        x = std::max(x, 1e-300);
        return -std::log(x) - (1.0 - x);
    };
    f.inv_exp_neg = [](double t) { return 1.0 / (1.0 + t); };
    f.neg_log_cdf = [](double s) {
        if (s >= 1.0) return 0.0;
        if (s <= 0.0) return kInf;
        return 1.0 / s - 1.0;
    };
    f.mean = expint_e1_scaled(1.0);  // Psi_F(1) = e E1(1)
    return f;
}

// --- Bondesson-class families (Stieltjes measures in closed form) -----------

struct BondessonFamily {
    StieltjesMeasure rho;
    std::function<double(double)> psi_H;       // closed Psi of H_1
    std::function<double(double)> survival_H;  // closed survival of nu_H
    double nu_total = kInf;                    // nu_H((0,inf))
};

inline BondessonFamily bondesson_45() {
    BondessonFamily b;
    b.rho.g_rho = [](double x) {
        if (x <= 1.0) return 0.5;
        return 1.0 / x - 0.5 / (x * x);
    };
    b.rho.g_rho_inverse = [](double y) {
        if (y >= 0.5) return 0.0;
        if (y <= 0.0) return kInf;
        return 1.0 / (1.0 - std::sqrt(1.0 - 2.0 * y));
    };
    b.rho.g_rho_inverse_left = [](double y) {
        if (y > 0.5) return 0.0;
        if (y == 0.5) return 1.0;
        if (y <= 0.0) return kInf;
        return 1.0 / (1.0 - std::sqrt(1.0 - 2.0 * y));
    };
    b.rho.total_mass = 0.5;
    b.psi_H = [](double x) {
        if (x == 0.0) return 0.0;
        if (std::isinf(x)) return 0.5;
        if (x > 1e4) return 0.5 - 1.0 / (6.0 * x) + 1.0 / (12.0 * x * x);
        return x * (1.0 + x) * std::log1p(1.0 / x) - x;
    };
    b.survival_H = [](double x) {
        if (x < 1e-4) return 0.5 - x / 6.0 + x * x / 24.0;
        return (x + std::expm1(-x)) / (x * x);
    };
    b.nu_total = 0.5;
    return b;
}

inline BondessonFamily bondesson_5(double theta) {
    BondessonFamily b;
    const double pi = 3.14159265358979323846;
    b.rho.g_rho = [theta, pi](double x) {
        const double v = 1.0 / x - theta;
        return v <= 0.0 ? 0.0 : 2.0 / pi * std::sqrt(v);
    };
    b.rho.g_rho_inverse = [theta, pi](double y) {
        if (y <= 0.0) return 1.0 / theta;
        const double h = pi * y / 2.0;
        return 1.0 / (theta + h * h);
    };
    b.rho.total_mass = kInf;
    b.psi_H = [theta](double x) { return x / std::sqrt(x + theta); };
    b.survival_H = [theta, pi](double x) {
        return std::exp(-theta * x) / std::sqrt(pi * x);
    };
    return b;
}

inline BondessonFamily bondesson_33(double theta) {
    BondessonFamily b;
    b.rho.g_rho = [theta](double x) { return std::log1p(1.0 / (theta * x)); };
    b.rho.g_rho_inverse = [theta](double y) {
        return y <= 0.0 ? kInf : 1.0 / (theta * std::expm1(y));
    };
    b.rho.total_mass = kInf;
    b.psi_H = [theta](double x) {
        if (x == 0.0) return 0.0;
        const double u = (x - theta) / theta;
        if (std::abs(u) < 1e-5)
            return x * (1.0 - u / 2.0 + u * u / 3.0) / theta;
        return x * std::log(theta / x) / (theta - x);
    };
    b.survival_H = [theta](double x) { return expint_e1_scaled(theta * x); };
    return b;
}

inline BondessonFamily bondesson_64(double theta) {
    BondessonFamily b;
    const double pi = 3.14159265358979323846;
    const double sq_theta = std::sqrt(theta);
    b.rho.g_rho = [sq_theta](double x) {
        const double v = 1.0 / std::sqrt(x) - sq_theta;
        return v <= 0.0 ? 0.0 : v;
    };
    b.rho.g_rho_inverse = [sq_theta](double y) {
        if (y <= 0.0) return 1.0 / (sq_theta * sq_theta);
        const double d = y + sq_theta;
        return 1.0 / (d * d);
    };
    b.rho.total_mass = kInf;
    b.psi_H = [theta](double x) {
        return std::sqrt(x) * std::atan(std::sqrt(x / theta));
    };
    b.survival_H = [theta, pi](double x) {
        return 0.5 * std::sqrt(pi / x) * std::erfc(std::sqrt(theta * x));
    };
    return b;
}

// --- standalone closed-form stable tail dependence functions ----------------

// ell_d for F(x) = min{exp(x-1), 1}, expressed through Psi_H, with
// x_{[1]} <= ... <= x_{[d]} the ordered arguments. Zero coordinates must be
// dropped by the caller.
inline double closed_ell_exp_family(const std::function<double(double)>& psi_H,
                                    std::vector<double> t) {
    std::sort(t.begin(), t.end());
    const int d = static_cast<int>(t.size());
    std::vector<double> inv_tail(d + 1, 0.0);  // inv_tail[i] = sum_{j>=i} 1/x_[j]
    for (int i = d - 1; i >= 0; --i) inv_tail[i] = inv_tail[i + 1] + 1.0 / t[i];
    double result = d * psi_H(static_cast<double>(d)) / inv_tail[0];
    for (int i = 1; i <= d - 1; ++i) {
        const double coeff = (d - i + 1) / inv_tail[i - 1] - (d - i) / inv_tail[i];
        double arg = d - i;
        for (int j = i; j < d; ++j) arg -= t[i - 1] / t[j];
        result -= coeff * psi_H(std::max(arg, 0.0));
    }
    return result;
}

// ell_d for the Frechet family: Psi_H(1) (sum t_k^{1/theta})^theta.
inline double closed_ell_frechet(double theta, double psi_h1,
                                 const std::vector<double>& t) {
    double s = 0.0;
    for (double v : t) s += std::pow(v, 1.0 / theta);
    return psi_h1 * std::pow(s, theta);
}

// --- catalog ----------------------------------------------------------------

namespace detail {

inline double param_or(const ParamMap& p, const std::string& key, double dflt) {
    auto it = p.find(key);
    return it == p.end() ? dflt : it->second;
}

inline BernsteinFunction resolve_levy(LevyChoice choice, LevyChoice dflt) {
    const LevyChoice c = choice == LevyChoice::family_default ? dflt : choice;
    return c == LevyChoice::standard_poisson ? standard_poisson_subordinator()
                                             : unit_exp_cp_subordinator();
}

inline bool is_poisson_choice(LevyChoice choice, LevyChoice dflt) {
    const LevyChoice c = choice == LevyChoice::family_default ? dflt : choice;
    return c == LevyChoice::standard_poisson;
}

// Model assembly for a free-L family: registers Z = 1 for L = N and the
// exact Psi_H hooks that are independent of the choice of L.
inline IdtModel build_free_L(const DistributionF& F, LevyChoice choice,
                             LevyChoice dflt, bool normalize, ModelHooks hooks) {
    BernsteinFunction L = resolve_levy(choice, dflt);
    if (is_poisson_choice(choice, dflt)) {
        hooks.z_sampler = [](RngStream&) { return 1.0; };
        if (!hooks.psi_H && F.psi) hooks.psi_H = F.psi;  // H_1 ~ Psi_F under L = N
        if (!hooks.levy_H) {
            DistributionF Fc = F;
            hooks.levy_H = [Fc]() { return levy_from_distribution(Fc); };
        }
    }
    return make_model(check_admissible(F, L), normalize, std::move(hooks));
}

inline IdtModel build_bondesson(const BondessonFamily& fam, bool normalize) {
    DistributionF F = distribution_from_stieltjes(fam.rho);
    BernsteinFunction L = unit_exp_cp_subordinator();
    ModelHooks hooks;
    hooks.psi_H = fam.psi_H;
    auto surv = fam.survival_H;
    const double nu_total = fam.nu_total;
    hooks.levy_H = [surv, nu_total]() {
        LevyMeasure nu;
        nu.survival = surv;
        nu.atom_at_infinity = 0.0;
        nu.total_mass = nu_total;
        return make_levy(std::move(nu));
    };
    return make_model(check_admissible(F, L), normalize, std::move(hooks));
}

}  // namespace detail

inline const std::vector<FamilySpec>& catalog() {
    static const std::vector<FamilySpec> families = [] {
        std::vector<FamilySpec> v;

        v.push_back({"levy-bernoulli",
                     "F(x) = e^-1 + (1-e^-1) 1[1,inf)(x); H coincides with L. "
                     "Psi_F(x) = 1-e^-x; M = 1.",
                     {},
                     false,
                     [](const ParamMap&, LevyChoice choice, bool norm) {
                         DistributionF F = levy_bernoulli_F();
                         ModelHooks hooks;
                         BernsteinFunction L = detail::resolve_levy(
                             choice, LevyChoice::standard_poisson);
                         hooks.psi_H = L.eval;  // H = L for any driftless L
                         LevyMeasure nuL = L.levy;
                         hooks.levy_H = [nuL]() { return nuL; };
                         if (detail::is_poisson_choice(choice,
                                                       LevyChoice::standard_poisson))
                             hooks.z_sampler = [](RngStream&) { return 1.0; };
                         return make_model(check_admissible(F, L), norm,
                                           std::move(hooks));
                     }});

        v.push_back({"standard-poisson",
                     "The subordinator L = N (unit Poisson); combine with any F.",
                     {},
                     true,
                     [](const ParamMap&, LevyChoice, bool norm) {
                         // Standing alone this is the pair (levy-bernoulli, N).
                         DistributionF F = levy_bernoulli_F();
                         BernsteinFunction L = standard_poisson_subordinator();
                         ModelHooks hooks;
                         hooks.psi_H = L.eval;
                         LevyMeasure nuL = L.levy;
                         hooks.levy_H = [nuL]() { return nuL; };
                         hooks.z_sampler = [](RngStream&) { return 1.0; };
                         return make_model(check_admissible(F, L), norm,
                                           std::move(hooks));
                     }});

        v.push_back({"german-linear",
                     "F(x) = min{x,1}; Psi_F(y) = y/(y+1). Default L: compound "
                     "Poisson with unit-exponential jumps.",
                     {},
                     false,
                     [](const ParamMap&, LevyChoice choice, bool norm) {
                         return detail::build_free_L(german_linear_F(), choice,
                                                     LevyChoice::unit_exp_cp, norm, {});
                     }});

        v.push_back({"german-exp",
                     "F(x) = min{exp(x-1),1}; Psi_F(y) = 1-(1-e^-y)/y; closed-form "
                     "ell_d. Default L: standard Poisson.",
                     {},
                     false,
                     [](const ParamMap&, LevyChoice choice, bool norm) {
                         ModelHooks hooks;
                         hooks.ell = [](const IdtModel& m, const std::vector<double>& t) {
                             auto psi = [&m](double x) { return psi_H(m, x); };
                             return closed_ell_exp_family(psi, t);
                         };
                         return detail::build_free_L(german_exp_F(), choice,
                                                     LevyChoice::standard_poisson, norm,
                                                     std::move(hooks));
                     }});

        v.push_back({"frechet",
                     "F(x) = exp(-c x^(-1/theta)), c = Gamma(1-theta)^(-1/theta); "
                     "Psi_F(x) = x^theta and ell(t) = Psi_H(1) (sum t^(1/theta))^theta.",
                     {"theta"},
                     false,
                     [](const ParamMap& p, LevyChoice choice, bool norm) {
                         const double theta = detail::param_or(p, "theta", 0.5);
                         DistributionF F = frechet_F(theta);
                         BernsteinFunction L = detail::resolve_levy(
                             choice, LevyChoice::standard_poisson);
                         const double raw1 = psi_H_quadrature(F, L, 1.0, 1e-12);
                         ModelHooks hooks;
                         hooks.psi_H = [raw1, theta](double x) {
                             return raw1 * std::pow(x, theta);
                         };
                         hooks.ell = [theta](const IdtModel& m,
                                             const std::vector<double>& t) {
                             return closed_ell_frechet(theta, m.psi_h1, t);
                         };
                         if (detail::is_poisson_choice(choice,
                                                       LevyChoice::standard_poisson))
                             hooks.z_sampler = [](RngStream&) { return 1.0; };
                         DistributionF Fc = F;
                         hooks.levy_H = [Fc, raw1]() {
                             // nu_H = raw1-weighted stable measure; survival
                             // scales linearly in the mass.
                             LevyMeasure nu = levy_from_distribution(Fc, false);
                             auto s = nu.survival;
                             auto si = nu.survival_inverse;
                             LevyMeasure out;
                             out.survival = [s, raw1](double t) { return raw1 * s(t); };
                             out.survival_inverse = [si, raw1](double y) {
                                 return si(y / raw1);
                             };
                             out.total_mass = kInf;
                             out.jump_mean = kInf;
                             return make_levy(std::move(out));
                         };
                         return make_model(check_admissible(F, L), norm,
                                           std::move(hooks));
                     }});

        v.push_back({"galambos",
                     "F(x) = 1-e^-x with L = N.",
                     {},
                     true,
                     [](const ParamMap&, LevyChoice choice, bool norm) {
                         if (choice != LevyChoice::family_default &&
                             choice != LevyChoice::standard_poisson)
                             throw std::invalid_argument(
                                 "galambos: L is fixed to the standard Poisson process");
                         return detail::build_free_L(galambos_F(), choice,
                                                     LevyChoice::standard_poisson, norm,
                                                     {});
                     }});

        v.push_back({"molchanov-floor",
                     "Step cdf with left limits exp(-floor(1/x)), L = N; "
                     "Psi_F(x) = (e^x-1)(-log(1-e^-x)).",
                     {},
                     true,
                     [](const ParamMap&, LevyChoice choice, bool norm) {
                         if (choice != LevyChoice::family_default &&
                             choice != LevyChoice::standard_poisson)
                             throw std::invalid_argument(
                                 "molchanov-floor: L is fixed to the standard Poisson");
                         return detail::build_free_L(molchanov_floor_F(), choice,
                                                     LevyChoice::standard_poisson, norm,
                                                     {});
                     }});

        v.push_back({"molchanov-exp",
                     "F(x) = min{1, exp(1-1/x)}, L = N; Psi_F(x) = x e^x E1(x).",
                     {},
                     true,
                     [](const ParamMap&, LevyChoice choice, bool norm) {
                         if (choice != LevyChoice::family_default &&
                             choice != LevyChoice::standard_poisson)
                             throw std::invalid_argument(
                                 "molchanov-exp: L is fixed to the standard Poisson");
                         return detail::build_free_L(molchanov_exp_F(), choice,
                                                     LevyChoice::standard_poisson, norm,
                                                     {});
                     }});

        auto add_bondesson = [&v](const std::string& id, const std::string& summary,
                                  std::vector<std::string> params,
                                  std::function<BondessonFamily(const ParamMap&)> make) {
            v.push_back({id, summary, std::move(params), true,
                         [make](const ParamMap& p, LevyChoice choice, bool norm) {
                             if (choice != LevyChoice::family_default &&
                                 choice != LevyChoice::unit_exp_cp)
                                 throw std::invalid_argument(
                                     "bondesson families fix L to the unit-exponential "
                                     "compound Poisson");
                             return detail::build_bondesson(make(p), norm);
                         }});
        };

        add_bondesson("bondesson-45",
                      "Stieltjes measure beta G with beta = 1/2, G(x) = "
                      "min{x,1}(2-min{x,1}); Psi(x) = x(1+x)log(1+1/x)-x.",
                      {}, [](const ParamMap&) { return bondesson_45(); });
        add_bondesson("bondesson-5",
                      "Stieltjes density 1/(pi sqrt(x-theta)) on x > theta; "
                      "Psi(x) = x/sqrt(x+theta).",
                      {"theta"}, [](const ParamMap& p) {
                          return bondesson_5(detail::param_or(p, "theta", 1.0));
                      });
        add_bondesson("bondesson-33",
                      "Stieltjes density 1/(theta+x); Psi(x) = x log(theta/x)/(theta-x).",
                      {"theta"}, [](const ParamMap& p) {
                          return bondesson_33(detail::param_or(p, "theta", 1.0));
                      });
        add_bondesson("bondesson-64",
                      "Stieltjes density 1/(2 sqrt(x)) on x > theta; "
                      "Psi(x) = sqrt(x) arctan(sqrt(x/theta)).",
                      {"theta"}, [](const ParamMap& p) {
                          return bondesson_64(detail::param_or(p, "theta", 1.0));
                      });
        return v;
    }();
    return families;
}

inline const FamilySpec& find_family(const std::string& id) {
    for (const auto& f : catalog())
        if (f.id == id) return f;
    throw UnknownFamily("unknown family: " + id);
}

inline IdtModel make_family_model(const std::string& id, const ParamMap& params = {},
                                  LevyChoice choice = LevyChoice::family_default,
                                  bool normalize = false) {
    return find_family(id).build(params, choice, normalize);
}

}  // namespace idtsim
