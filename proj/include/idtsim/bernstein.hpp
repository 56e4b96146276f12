#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "idtsim/core.hpp"
#include "idtsim/numerics.hpp"
#include "idtsim/rng.hpp"

namespace idtsim {

// A distribution function F on [0,inf) with positive finite mean, carried
// behaviorally: the cdf, its left limits, the generalized inverse, and the
// sampler for powers F^z. Optional closed forms (psi, neg_log_tail,
// m_sampler) are registered by the family catalog and picked up by the
// generic algorithms when present.
struct DistributionF {
    std::function<double(double)> cdf;       // F(x), right-continuous
    std::function<double(double)> cdf_left;  // F(x-)
    std::function<double(double)> inverse;   // inf{x : F(x) >= y}, y in (0,1]
    double mean = 0.0;                       // integral of 1-F
    double left_support = 0.0;               // left end point of supp dF
    double right_support = kInf;             // u_F

    // Optional registered closed forms.
    std::function<double(double)> psi;           // Psi_F(x)
    std::function<double(double)> neg_log_tail;  // G_F(x) = int_x^inf -log F(u) du
    std::function<double(double)> inv_exp_neg;   // t -> F^{-1}(exp(-t))
    std::function<double(double)> neg_log_cdf;   // s -> -log F(s), exact in the tail
    std::function<double(double, RngStream&)> power_sampler;  // draw from F^z
    std::function<double(double, RngStream&)> m_sampler;      // draw from x dF^z / Psi_F(z)
};

// A Levy measure on (0, inf], represented through its survival function
// S(t) = nu((t, inf]) and generalized inverse. total_mass = nu((0, inf])
// includes the killing atom at infinity.
struct LevyMeasure {
    std::function<double(double)> survival;
    std::function<double(double)> survival_inverse;       // inf{t : S(t) <= y}
    std::function<double(double)> survival_inverse_left;  // inf{t : S(t) < y}
    double atom_at_infinity = 0.0;
    double total_mass = kInf;
    double jump_mean = kInf;     // int u nu(du); inf when killed or heavy-tailed
    double support_lower = 0.0;  // essential inf of the jump law; 0 if unknown
};

struct BernsteinFunction {
    std::function<double(double)> eval;  // Psi(x)
    LevyMeasure levy;
    bool bounded = false;  // lim Psi < inf  <=>  total_mass < inf
    bool killing = false;  // nu({inf}) > 0
    double derivative_at_zero = kInf;
};

// Stieltjes measure rho on (0, inf) via g_rho(x) = rho((0, 1/x)).
struct StieltjesMeasure {
    std::function<double(double)> g_rho;
    std::function<double(double)> g_rho_inverse;       // inf{x : g(x) <= y}
    std::function<double(double)> g_rho_inverse_left;  // inf{x : g(x) < y}
    double total_mass = kInf;
};

namespace detail {

inline double pow_cdf(double c, double x) {
    // F(s)^x with the exp(-inf) = 0 convention; x = 0 gives 1.
    if (x == 0.0) return 1.0;
    if (c >= 1.0) return 1.0;
    if (c <= 0.0) return 0.0;
    return std::exp(x * std::log(c));
}

inline double neg_log(double c) {
    if (c >= 1.0) return 0.0;
    if (c <= 0.0) return kInf;
    return -std::log(c);
}

}  // namespace detail

// Draw one jump from the normalized law nu / |nu|; requires finite total
// mass. A draw below the killing atom maps to +inf.
inline double sample_jump(const LevyMeasure& nu, RngStream& rng) {
    if (!std::isfinite(nu.total_mass))
        throw NotCompoundPoisson("sample_jump: total mass is infinite");
    if (!nu.survival_inverse)
        throw InverseUnavailable("sample_jump: survival inverse missing");
    return nu.survival_inverse(rng.uniform() * nu.total_mass);
}

// --- builders -------------------------------------------------------------

// Fill the derived fields of a distribution given at least the cdf and
// support. Missing pieces fall back to numeric routes: bisection for the
// inverse, quadrature for the mean, inversion for the power sampler.
inline DistributionF make_distribution(DistributionF f) {
    if (!f.cdf) throw std::invalid_argument("make_distribution: cdf required");
    if (!f.cdf_left) f.cdf_left = f.cdf;
    if (!f.inverse) {
        auto cdf = f.cdf;
        const double hi = f.right_support;
        const double at_zero = f.cdf(0.0);
        f.inverse = [cdf, hi, at_zero](double y) {
            y = std::min(y, 1.0);
            if (y <= at_zero) return 0.0;  // cdf convention below F(0)
            MonotoneFn m{Direction::increasing, 0.0, hi, cdf, nullptr};
            return generalized_inverse(m, y);
        };
    }
    if (!f.neg_log_cdf) {
        auto cdf = f.cdf;
        f.neg_log_cdf = [cdf](double s) { return detail::neg_log(cdf(s)); };
    }
    if (!f.inv_exp_neg) {
        // Unbounded-support families should register this in log space:
        // exp(-t) rounds to 1 below t ~ 1e-16 and the default would then
        // return u_F prematurely.
        auto inv = f.inverse;
        f.inv_exp_neg = [inv](double t) { return inv(std::exp(-t)); };
    }
    if (f.mean == 0.0) {
        auto nlc = f.neg_log_cdf;  // 1 - F = -expm1(-(-log F)), tail-exact
        f.mean = integrate_adaptive(
                     [nlc](double s) { return -std::expm1(-nlc(s)); }, 0.0,
                     f.right_support, 1e-9)
                     .value;
    }
    if (!f.power_sampler) {
        auto inv = f.inverse;
        f.power_sampler = [inv](double z, RngStream& rng) {
            return inv(std::exp(std::log(rng.uniform()) / z));
        };
    }
    if (!(f.mean > 0.0) || !std::isfinite(f.mean))
        throw Error("make_distribution: mean must be in (0, inf)");
    return f;
}

inline LevyMeasure make_levy(LevyMeasure nu) {
    if (!nu.survival) throw std::invalid_argument("make_levy: survival required");
    if (!nu.survival_inverse) {
        auto s = nu.survival;
        nu.survival_inverse = [s](double y) {
            MonotoneFn m{Direction::decreasing, 0.0, kInf, s, nullptr};
            return generalized_inverse(m, y);
        };
    }
    if (!nu.survival_inverse_left) nu.survival_inverse_left = nu.survival_inverse;
    return nu;
}

// Psi(x) = kappa + x * int_0^inf exp(-x t) (S(t) - kappa) dt, the generic
// quadrature evaluation of a Bernstein function from its Levy measure.
inline BernsteinFunction make_bernstein_from_levy(LevyMeasure nu,
                                                  std::function<double(double)> eval = {}) {
    nu = make_levy(std::move(nu));
    BernsteinFunction psi;
    psi.levy = nu;
    psi.bounded = std::isfinite(nu.total_mass);
    psi.killing = nu.atom_at_infinity > 0.0;
    psi.derivative_at_zero = psi.killing ? kInf : nu.jump_mean;
    if (eval) {
        psi.eval = std::move(eval);
    } else {
        auto s = nu.survival;
        const double kappa = nu.atom_at_infinity;
        psi.eval = [s, kappa](double x) {
            if (x == 0.0) return 0.0;
            auto integrand = [&](double t) {
                return std::exp(-x * t) * (s(t) - kappa);
            };
            return kappa + x * integrate_adaptive(integrand, 0.0, kInf, 1e-10).value;
        };
    }
    return psi;
}

// --- the four-way dictionary ----------------------------------------------

// nu_F((t, inf]) = F^{-1}(exp(-t)); its generalized inverse collapses to
// -log F by the Galois relation F^{-1}(p) <= y <=> p <= F(y).
inline LevyMeasure levy_from_distribution(const DistributionF& f,
                                          bool want_jump_mean = true) {
    LevyMeasure nu;
    auto inv = f.inverse;
    if (f.inv_exp_neg) {
        nu.survival = f.inv_exp_neg;
    } else {
        nu.survival = [inv](double t) { return inv(std::exp(-t)); };
    }
    auto cdf = f.cdf;
    nu.survival_inverse = [cdf](double y) { return detail::neg_log(cdf(y)); };
    auto cdf_left = f.cdf_left;
    nu.survival_inverse_left = [cdf_left](double y) {
        return detail::neg_log(cdf_left(y));
    };
    nu.atom_at_infinity = f.left_support;
    nu.total_mass = f.right_support;
    nu.support_lower = 0.0;
    if (f.left_support > 0.0) {
        nu.jump_mean = kInf;
    } else if (want_jump_mean) {
        // int u nu_F(du) = int_0^1 F^{-1}(y)/y dy; computed in y so that a
        // divergence at y -> 0 stays visible to the error control.
        try {
            auto r = integrate_adaptive([inv](double y) { return inv(y) / y; },
                                        0.0, 1.0, 1e-9, 400);
            nu.jump_mean = r.value;
        } catch (const NonConvergence&) {
            nu.jump_mean = kInf;
        }
    }
    return nu;
}

// Psi_F(x) = int_0^inf (1 - F(s)^x) ds. Closed form when registered.
inline BernsteinFunction psi_from_distribution(const DistributionF& f) {
    std::function<double(double)> eval;
    if (f.psi) {
        eval = f.psi;
    } else if (f.neg_log_cdf) {
        auto nlc = f.neg_log_cdf;
        const double uF = f.right_support;
        eval = [nlc, uF](double x) {
            if (x == 0.0) return 0.0;
            auto integrand = [&](double s) { return -std::expm1(-x * nlc(s)); };
            return integrate_adaptive(integrand, 0.0, uF, 1e-9).value;
        };
    } else {
        auto cdf = f.cdf;
        const double uF = f.right_support;
        eval = [cdf, uF](double x) {
            if (x == 0.0) return 0.0;
            auto integrand = [&](double s) {
                return 1.0 - detail::pow_cdf(cdf(s), x);
            };
            return integrate_adaptive(integrand, 0.0, uF, 1e-9).value;
        };
    }
    return make_bernstein_from_levy(levy_from_distribution(f), std::move(eval));
}

// F_nu(t): 0 below the killing atom, exp(-S^{-1}(t)) on [kappa, mass), 1
// beyond. The closed generalized inverse is F^{-1}(y) = S(-log y).
inline DistributionF distribution_from_levy(const LevyMeasure& nu_in) {
    LevyMeasure nu = make_levy(nu_in);
    DistributionF f;
    const double kappa = nu.atom_at_infinity;
    const double mass = nu.total_mass;
    auto sinv = nu.survival_inverse;
    auto sinv_left = nu.survival_inverse_left;
    f.cdf = [kappa, mass, sinv](double t) {
        if (t < kappa || t < 0.0) return 0.0;
        if (t >= mass) return 1.0;
        return std::exp(-sinv(t));
    };
    f.cdf_left = [kappa, mass, sinv_left](double t) {
        if (t <= kappa || t <= 0.0) return 0.0;
        if (t > mass) return 1.0;
        return std::exp(-sinv_left(t));
    };
    auto surv = nu.survival;
    f.inverse = [kappa, mass, surv](double y) {
        if (y >= 1.0) return mass;
        return std::max(surv(-std::log(y)), kappa);
    };
    f.inv_exp_neg = [kappa, surv](double t) { return std::max(surv(t), kappa); };
    f.neg_log_cdf = [kappa, mass, sinv](double t) {
        if (t < kappa || t < 0.0) return kInf;
        if (t >= mass) return 0.0;
        return sinv(t);
    };
    f.left_support = kappa;
    f.right_support = mass;
    f.mean = kappa + integrate_adaptive(
                         [surv, kappa](double t) {
                             return std::exp(-t) * (surv(t) - kappa);
                         },
                         0.0, kInf, 1e-9)
                         .value;
    return make_distribution(std::move(f));
}

// rho_F: the image of nu_F under u -> 1/u; g_rho(x) = nu_F((x, inf)).
inline StieltjesMeasure stieltjes_from_distribution(const DistributionF& f) {
    if (f.left_support > 0.0)
        throw NotInFhat("stieltjes_from_distribution: F has killing (left support > 0)");
    StieltjesMeasure rho;
    if (f.inv_exp_neg) {
        rho.g_rho = f.inv_exp_neg;
    } else {
        auto inv = f.inverse;
        rho.g_rho = [inv](double x) { return inv(std::exp(-x)); };
    }
    auto cdf = f.cdf;
    rho.g_rho_inverse = [cdf](double y) { return detail::neg_log(cdf(y)); };
    auto cdf_left = f.cdf_left;
    rho.g_rho_inverse_left = [cdf_left](double y) {
        return detail::neg_log(cdf_left(y));
    };
    rho.total_mass = f.right_support;
    return rho;
}

// F_rho(x) = exp(-g^{-1}(x)) below the total mass, 1 beyond.
inline DistributionF distribution_from_stieltjes(const StieltjesMeasure& rho_in) {
    StieltjesMeasure rho = rho_in;
    if (!rho.g_rho_inverse) {
        auto g = rho.g_rho;
        rho.g_rho_inverse = [g](double y) {
            MonotoneFn m{Direction::decreasing, 0.0, kInf, g, nullptr};
            return generalized_inverse(m, y);
        };
    }
    if (!rho.g_rho_inverse_left) rho.g_rho_inverse_left = rho.g_rho_inverse;
    DistributionF f;
    const double mass = rho.total_mass;
    auto ginv = rho.g_rho_inverse;
    auto ginv_left = rho.g_rho_inverse_left;
    f.cdf = [mass, ginv](double x) {
        if (x < 0.0) return 0.0;
        if (x >= mass) return 1.0;
        return std::exp(-ginv(x));
    };
    f.cdf_left = [mass, ginv_left](double x) {
        if (x <= 0.0) return 0.0;
        if (x > mass) return 1.0;
        return std::exp(-ginv_left(x));
    };
    auto g = rho.g_rho;
    f.inverse = [mass, g](double y) {
        if (y >= 1.0) return mass;
        return g(-std::log(y));
    };
    f.inv_exp_neg = g;
    f.neg_log_cdf = [mass, ginv](double x) {
        if (x < 0.0) return kInf;
        if (x >= mass) return 0.0;
        return ginv(x);
    };
    f.left_support = 0.0;
    f.right_support = mass;
    return make_distribution(std::move(f));
}

// F(c x) rescaling; Psi_{F(c.)} = Psi_F / c. Registered closed forms are
// carried over, so rescaled catalog families keep exact samplers.
inline DistributionF rescale_distribution(const DistributionF& f, double c) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("rescale_distribution: c must be in (0, inf)");
    if (c == 1.0) return f;
    DistributionF g;
    auto cdf = f.cdf;
    g.cdf = [cdf, c](double x) { return cdf(c * x); };
    auto cdfl = f.cdf_left;
    g.cdf_left = [cdfl, c](double x) { return cdfl(c * x); };
    auto inv = f.inverse;
    g.inverse = [inv, c](double y) { return inv(y) / c; };
    g.mean = f.mean / c;
    g.left_support = f.left_support / c;
    g.right_support = f.right_support / c;
    if (f.psi) {
        auto psi = f.psi;
        g.psi = [psi, c](double x) { return psi(x) / c; };
    }
    if (f.neg_log_tail) {
        auto tail = f.neg_log_tail;
        g.neg_log_tail = [tail, c](double x) { return tail(c * x) / c; };
    }
    if (f.inv_exp_neg) {
        auto ien = f.inv_exp_neg;
        g.inv_exp_neg = [ien, c](double t) { return ien(t) / c; };
    }
    if (f.neg_log_cdf) {
        auto nlc = f.neg_log_cdf;
        g.neg_log_cdf = [nlc, c](double x) { return nlc(c * x); };
    }
    if (f.power_sampler) {
        auto ps = f.power_sampler;
        g.power_sampler = [ps, c](double z, RngStream& rng) { return ps(z, rng) / c; };
    }
    if (f.m_sampler) {
        auto ms = f.m_sampler;
        g.m_sampler = [ms, c](double z, RngStream& rng) { return ms(z, rng) / c; };
    }
    return g;
}

// G_F(x) = int_x^inf -log F(u) du, the tail integral used by truncation
// bounds. Uses the registered closed form when available.
inline double neg_log_tail_integral(const DistributionF& f, double x) {
    if (f.neg_log_tail) return f.neg_log_tail(x);
    if (x >= f.right_support) return 0.0;
    auto nlc = f.neg_log_cdf;
    if (!nlc) {
        auto cdf = f.cdf;
        nlc = [cdf](double u) { return detail::neg_log(cdf(u)); };
    }
    return integrate_adaptive(nlc, x, f.right_support, 1e-9).value;
}

}  // namespace idtsim
