#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "idtsim/bernstein.hpp"
#include "idtsim/core.hpp"
#include "idtsim/numerics.hpp"

namespace idtsim {

// An admissibility-checked pair (F, L). The certificate names the rule that
// established the verdict (fast path, quadrature value, or duality).
struct IdtPair {
    DistributionF F;
    BernsteinFunction L;
    bool admissible = false;
    std::string certificate;
};

struct IdtModel;

// Hooks a family may register on a model. psi_H refers to the *unscaled*
// pair; ell receives the model so it can use the rescaled Psi_H.
struct ModelHooks {
    std::function<double(double)> psi_H;
    std::function<double(const IdtModel&, const std::vector<double>&)> ell;
    std::function<double(RngStream&)> z_sampler;
    std::function<LevyMeasure()> levy_H;  // Levy measure of the unscaled Psi_H
};

namespace detail {

inline double psi_L_of_weight(const BernsteinFunction& L, double w) {
    if (w == 0.0) return 0.0;
    if (std::isinf(w)) return L.levy.total_mass;  // Psi_L(inf) = nu_L((0,inf])
    return L.eval(w);
}

inline std::function<double(double)> neg_log_F(const DistributionF& F) {
    if (F.neg_log_cdf) return F.neg_log_cdf;
    auto cdf = F.cdf;
    return [cdf](double s) { return neg_log(cdf(s)); };
}

inline std::function<double(double)> psi_F_evaluator(const DistributionF& F) {
    if (F.psi) return F.psi;
    auto nlf = neg_log_F(F);
    const double uF = F.right_support;
    return [nlf, uF](double x) {
        if (x == 0.0) return 0.0;
        if (std::isinf(x)) return uF;
        auto integrand = [&](double s) { return -std::expm1(-x * nlf(s)); };
        return integrate_adaptive(integrand, 0.0, uF, 1e-9).value;
    };
}

}  // namespace detail

// Psi_H(x) = int Psi_F(x y) nu_L(dy), evaluated through the quantile
// representation of nu_L when a closed Psi_F is registered, and through
// Psi_H(x) = int_0^{u_F} Psi_L(-x log F(s)) ds otherwise.
inline double psi_H_quadrature(const DistributionF& F, const BernsteinFunction& L,
                               double x, double rel_tol = 1e-9) {
    if (x == 0.0) return 0.0;
    if (F.psi) {
        auto psiF = F.psi;
        auto sinv = L.levy.survival_inverse;
        const double uF = F.right_support;
        auto integrand = [psiF, sinv, x, uF](double p) {
            const double u = sinv(p);
            if (std::isinf(u)) return uF;  // Psi_F at infinity is u_F
            if (u <= 0.0) return 0.0;
            return psiF(x * u);
        };
        return integrate_adaptive(integrand, 0.0, L.levy.total_mass, rel_tol).value;
    }
    auto nlf = detail::neg_log_F(F);
    auto integrand = [&L, nlf, x](double s) {
        return detail::psi_L_of_weight(L, x * nlf(s));
    };
    std::vector<double> breaks;
    if (F.left_support > 0.0) breaks.push_back(F.left_support);
    return integrate_adaptive_split(integrand, 0.0, F.right_support, breaks, rel_tol)
        .value;
}

// ell(t_1,...,t_d) = int_0^inf Psi_L(sum_k -log F(s/t_k)) ds. Zero entries
// are dropped (they contribute the factor 1); infinite entries are invalid.
inline double ell_quadrature(const DistributionF& F, const BernsteinFunction& L,
                             const std::vector<double>& t_in,
                             double rel_tol = 1e-9) {
    std::vector<double> t;
    t.reserve(t_in.size());
    for (double v : t_in) {
        if (!(v >= 0.0) || std::isinf(v))
            throw std::invalid_argument("ell: arguments must be finite and >= 0");
        if (v > 0.0) t.push_back(v);
    }
    if (t.empty()) throw std::invalid_argument("ell: needs at least one positive entry");
    const double tmax = *std::max_element(t.begin(), t.end());
    const double uF = F.right_support;
    const double hi = std::isfinite(uF) ? uF * tmax : kInf;
    auto nlf = detail::neg_log_F(F);
    auto integrand = [&L, &t, nlf](double s) {
        double w = 0.0;
        for (double tk : t) {
            w += nlf(s / tk);
            if (std::isinf(w)) break;
        }
        return detail::psi_L_of_weight(L, w);
    };
    std::vector<double> breaks;
    for (double tk : t) {
        if (std::isfinite(uF) && uF * tk < hi) breaks.push_back(uF * tk);
        if (F.left_support > 0.0) breaks.push_back(F.left_support * tk);
    }
    return integrate_adaptive_split(integrand, 0.0, hi, breaks, rel_tol).value;
}

// Decides admissibility of (F, L), i.e. whether Psi_H(1) = int Psi_F dnu_L
// is finite. Fast paths cover the compound-Poisson-with-finite-jump-mean
// case and the bounded-Psi_F-with-finite-slope case; otherwise the integral
// is scanned over dyadic octaves of the quantile variable. Divergence is
// certified when lower sums exceed `cap` or when octave contributions stop
// decaying; throws Inconclusive when neither convergence nor divergence can
// be certified within the scan range.
inline IdtPair check_admissible(const DistributionF& F, const BernsteinFunction& L,
                                double cap = 1e12) {
    IdtPair pair{F, L, false, ""};
    if (!(L.levy.total_mass > 0.0))
        throw std::invalid_argument("check_admissible: L must have non-zero Levy measure");

    if (L.bounded && std::isfinite(L.levy.jump_mean)) {
        pair.admissible = true;
        pair.certificate = "fast-path: compound Poisson L with finite jump mean";
        return pair;
    }
    if (std::isfinite(F.right_support)) {
        const double slope = levy_from_distribution(F).jump_mean;
        if (std::isfinite(slope)) {
            pair.admissible = true;
            pair.certificate = "fast-path: bounded Psi_F with finite derivative at zero";
            return pair;
        }
    }
    if (L.killing && !std::isfinite(F.right_support)) {
        pair.admissible = false;
        pair.certificate = "divergent: L has killing and Psi_F is unbounded";
        return pair;
    }

    auto psiF = detail::psi_F_evaluator(F);
    const double kappa = L.levy.atom_at_infinity;
    const double span = L.levy.total_mass - kappa;
    auto sinv = L.levy.survival_inverse;
    auto h = [&](double q) {
        const double u = sinv(kappa + q);
        if (std::isinf(u)) return F.right_support;
        if (u <= 0.0) return 0.0;
        return psiF(u);
    };

    double lower = kappa * F.right_support;  // atom contributes kappa * Psi_F(inf)
    double upper = lower;
    bool divergent = false, convergent_low = false, convergent_high = false;
    // Octave [a, b) with monotone non-increasing h: h(b)(b-a) is a lower and
    // h(a)(b-a) an upper bound for the octave's contribution. flat_run
    // counts consecutive octaves whose lower bound stops decaying, which
    // certifies divergence by extrapolation (log-divergent integrals never
    // push the raw lower sums past any practical cap).
    auto scan = [&](double from_exp2, int steps, int dir, bool& converged) {
        int flat_run = 0;
        double prev_term = -1.0;
        for (int k = 0; k < steps; ++k) {
            const int j = static_cast<int>(from_exp2) + dir * k;
            const double a = std::min(std::exp2(j), span);
            const double b = std::min(std::exp2(j + 1), span);
            if (!(b > a)) {
                converged = true;
                return;
            }
            const double term_lo = h(b) * (b - a);
            const double term_hi = h(a) * (b - a);
            lower += term_lo;
            upper += term_hi;
            if (lower > cap) {
                divergent = true;
                return;
            }
            if (term_hi < 1e-17 * std::max(1.0, upper)) {
                converged = true;
                return;
            }
            if (prev_term >= 0.0 && term_lo >= 0.999 * prev_term &&
                term_lo > 1e-13 * std::max(1.0, lower)) {
                if (++flat_run >= 12 && k >= 30) {
                    divergent = true;
                    return;
                }
            } else {
                flat_run = 0;
            }
            prev_term = term_lo;
        }
    };
    scan(-1.0, 1060, -1, convergent_low);  // octaves (2^-1061, 1], large jumps
    if (!divergent) scan(0.0, 1020, +1, convergent_high);  // octaves (1, span)

    if (divergent) {
        pair.admissible = false;
        pair.certificate = lower > cap
                               ? "divergent: lower Riemann sums exceeded cap"
                               : "divergent: octave contributions stopped decaying";
        return pair;
    }
    if (convergent_low && convergent_high) {
        pair.admissible = true;
        double value = upper;
        try {
            value = psi_H_quadrature(F, L, 1.0, 1e-9);
        } catch (const NonConvergence& e) {
            value = e.value;
        }
        pair.certificate = "quadrature: Psi_H(1) = " + std::to_string(value);
        return pair;
    }
    throw Inconclusive("check_admissible: octave scan exhausted without certificate");
}

// The analytical object: a (possibly rescaled) admissible pair together
// with its Bernstein function Psi_H and any registered closed forms.
struct IdtModel {
    IdtPair pair;  // the original pair, pre-rescaling
    DistributionF F;
    BernsteinFunction L;
    double scale_c = 1.0;
    bool normalized = false;
    double psi_h1 = kInf;  // Psi_H(1) of this model
    BernsteinFunction psi_H;

    std::function<double(double)> psi_H_closed;
    std::function<double(const IdtModel&, const std::vector<double>&)> ell_closed;
    std::function<double(RngStream&)> z_sampler;
};

inline double psi_H(const IdtModel& m, double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("psi_H: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (m.psi_H_closed) return m.psi_H_closed(x);
    return psi_H_quadrature(m.F, m.L, x);
}

inline double ell(const IdtModel& m, const std::vector<double>& t,
                  double rel_tol = 1e-9) {
    if (m.ell_closed) {
        std::vector<double> cleaned;
        for (double v : t) {
            if (!(v >= 0.0) || std::isinf(v))
                throw std::invalid_argument("ell: arguments must be finite and >= 0");
            if (v > 0.0) cleaned.push_back(v);
        }
        if (cleaned.empty())
            throw std::invalid_argument("ell: needs at least one positive entry");
        return m.ell_closed(m, cleaned);
    }
    return ell_quadrature(m.F, m.L, t, rel_tol);
}

namespace detail {

// Generic Levy measure of Psi_H: S_H(t) = int S_F(t/u) nu_L(du) through the
// quantile representation. Expensive (nested quadrature per call); families
// override with closed forms where they exist.
inline LevyMeasure generic_levy_H(const DistributionF& F, const BernsteinFunction& L) {
    LevyMeasure nu;
    auto finv = F.inverse;
    auto sinvL = L.levy.survival_inverse;
    const double massL = L.levy.total_mass;
    nu.survival = [finv, sinvL, massL](double t) {
        auto integrand = [&](double p) {
            const double u = sinvL(p);
            const double s = std::isinf(u) ? 0.0 : t / u;
            return finv(std::exp(-s));
        };
        return integrate_adaptive(integrand, 0.0, massL, 1e-9).value;
    };
    nu.atom_at_infinity = F.left_support * (L.levy.total_mass - L.levy.atom_at_infinity) +
                          L.levy.atom_at_infinity * F.right_support;
    nu.total_mass = F.right_support * L.levy.total_mass;
    const double mF = levy_from_distribution(F).jump_mean;
    nu.jump_mean = mF * L.levy.jump_mean;
    return make_levy(std::move(nu));
}

}  // namespace detail

// Assemble a model from an admissible pair. When `normalize` is set, F is
// rescaled by the unique c = Psi_H(1) so that the model satisfies
// Psi_H(1) = 1.
inline IdtModel make_model(const IdtPair& pair, bool normalize = false,
                           ModelHooks hooks = {}) {
    if (!pair.admissible)
        throw Error("make_model: pair is not admissible (" + pair.certificate + ")");
    IdtModel m;
    m.pair = pair;
    m.L = pair.L;
    const double raw1 = hooks.psi_H ? hooks.psi_H(1.0)
                                    : psi_H_quadrature(pair.F, pair.L, 1.0, 1e-11);
    m.scale_c = normalize ? raw1 : 1.0;
    m.normalized = normalize;
    m.F = rescale_distribution(pair.F, m.scale_c);
    m.psi_h1 = raw1 / m.scale_c;
    if (hooks.psi_H) {
        auto h = hooks.psi_H;
        const double c = m.scale_c;
        m.psi_H_closed = [h, c](double x) { return h(x) / c; };
    }
    m.ell_closed = hooks.ell;
    m.z_sampler = hooks.z_sampler;

    LevyMeasure nuH = hooks.levy_H ? hooks.levy_H()
                                   : detail::generic_levy_H(pair.F, pair.L);
    if (m.scale_c != 1.0) {
        // Psi_H scales by 1/c, so the Levy measure's mass does as well.
        const double c = m.scale_c;
        auto s = nuH.survival;
        auto si = nuH.survival_inverse;
        auto sil = nuH.survival_inverse_left;
        LevyMeasure scaled;
        scaled.survival = [s, c](double t) { return s(t) / c; };
        scaled.survival_inverse = [si, c](double y) { return si(y * c); };
        scaled.survival_inverse_left = sil ? std::function<double(double)>(
                                                 [sil, c](double y) { return sil(y * c); })
                                           : scaled.survival_inverse;
        scaled.atom_at_infinity = nuH.atom_at_infinity / c;
        scaled.total_mass = nuH.total_mass / c;
        scaled.jump_mean = nuH.jump_mean / c;
        scaled.support_lower = nuH.support_lower;
        nuH = std::move(scaled);
    }
    DistributionF F_model = m.F;
    BernsteinFunction L_model = m.L;
    std::function<double(double)> eval;
    if (m.psi_H_closed) {
        eval = m.psi_H_closed;
    } else {
        eval = [F_model, L_model](double x) {
            return x == 0.0 ? 0.0 : psi_H_quadrature(F_model, L_model, x);
        };
    }
    m.psi_H = make_bernstein_from_levy(std::move(nuH), std::move(eval));
    return m;
}

inline IdtModel make_model(const DistributionF& F, const BernsteinFunction& L,
                           bool normalize = false, ModelHooks hooks = {}) {
    return make_model(check_admissible(F, L), normalize, std::move(hooks));
}

// Roles of F and L switched: Psi_{F'} = Psi_L and Psi_{L'} = Psi_F. The
// one-dimensional margins of H are unchanged, so admissibility carries over.
inline IdtPair dual_pair(const IdtPair& p) {
    if (!p.admissible) throw Error("dual_pair: pair is not admissible");
    IdtPair dual;
    dual.F = distribution_from_levy(p.L.levy);
    dual.L = psi_from_distribution(p.F);
    dual.admissible = true;
    dual.certificate = "dual of admissible pair (" + p.certificate + ")";
    return dual;
}

inline bool is_compound_poisson(const IdtModel& m) {
    return m.L.bounded && std::isfinite(m.F.right_support);
}

inline bool has_killing(const IdtModel& m) {
    return m.F.left_support > 0.0 || m.L.killing;
}

inline IdtModel normalize(const IdtPair& pair, ModelHooks hooks = {}) {
    return make_model(pair, true, std::move(hooks));
}

// Bernstein function of the forward-looking increment part X1 of
// H_{t+x} - H_t (bounded support only):
//   Psi_1(alpha) = x * int_0^{u_F} Psi_L(-alpha log F((x y + u_F t)/(x+t))) dy.
inline double increment_psi1(const IdtModel& m, double t, double x, double alpha) {
    const double uF = m.F.right_support;
    if (!std::isfinite(uF))
        throw UnboundedSupport("increment_psi1: requires u_F < inf");
    if (!(t > 0.0) || !(x > 0.0))
        throw std::invalid_argument("increment_psi1: t and x must be > 0");
    if (alpha == 0.0) return 0.0;
    auto nlf = detail::neg_log_F(m.F);
    const BernsteinFunction& L = m.L;
    auto integrand = [&](double y) {
        const double arg = (x * y + uF * t) / (x + t);
        return detail::psi_L_of_weight(L, alpha * nlf(arg));
    };
    return x * integrate_adaptive(integrand, 0.0, uF, 1e-10).value;
}

}  // namespace idtsim
