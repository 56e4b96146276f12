#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

#include "idtsim/bernstein.hpp"
#include "idtsim/core.hpp"
#include "idtsim/numerics.hpp"
#include "idtsim/rng.hpp"

namespace idtsim {

struct SeriesSample {
    double value = 0.0;        // in [0, inf]; inf = killed
    std::uint64_t terms_used = 0;
    bool exact = true;
    double truncation_error_bound = 0.0;
};

namespace detail {

// Series sum fn(tau_1) + fn(tau_2) + ... over unit Poisson arrivals, with
// optional iid unit-exponential weights. Exact when the driving mass is
// finite; otherwise truncated once the expected remainder (the tail
// integral of the non-increasing fn, by Campbell's formula) drops below
// tol.
inline SeriesSample series_over_arrivals(const std::function<double(double)>& fn,
                                         double total_mass, RngStream& rng,
                                         double tol, bool exponential_weights) {
    SeriesSample s;
    double tau = rng.exponential();
    if (std::isfinite(total_mass)) {
        while (tau <= total_mass) {
            const double w = exponential_weights ? rng.exponential() : 1.0;
            s.value += mul_weight(w, fn(tau));
            ++s.terms_used;
            tau += rng.exponential();
        }
        return s;
    }
    double next_tail_check = 0.0;
    for (;;) {
        const double f = fn(tau);
        if (f < tol && tau >= next_tail_check) {
            const double tail = integrate_adaptive(fn, tau, kInf, 1e-6).value;
            if (f + tail <= 2.0 * tol) {
                s.exact = false;
                s.truncation_error_bound = f + tail;
                return s;
            }
            next_tail_check = 2.0 * tau;
        }
        const double w = exponential_weights ? rng.exponential() : 1.0;
        s.value += mul_weight(w, f);
        ++s.terms_used;
        tau += rng.exponential();
        if (s.terms_used > 200000000)
            throw NonConvergence("series_over_arrivals: no termination", s.value,
                                 kInf, static_cast<std::int64_t>(s.terms_used));
    }
}

}  // namespace detail

// Duality series: X = sum_k S^{-1}(tau_k) 1{tau_k <= nu((0,inf])}. Exact
// for finite Levy mass; an arrival below the killing atom yields +inf.
inline SeriesSample sample_id_duality(const LevyMeasure& nu, RngStream& rng,
                                      double tol = 1e-4) {
    if (!nu.survival_inverse)
        throw InverseUnavailable("sample_id_duality: survival inverse missing");
    return detail::series_over_arrivals(nu.survival_inverse, nu.total_mass, rng, tol,
                                        /*exponential_weights=*/false);
}

// Bondesson series: X = sum_k J_k g^{-1}(tau_k) 1{tau_k <= rho((0,inf))}
// with iid unit-exponential marks J_k.
inline SeriesSample sample_bondesson(const StieltjesMeasure& rho, RngStream& rng,
                                     double tol = 1e-4) {
    if (!rho.g_rho_inverse)
        throw InverseUnavailable("sample_bondesson: g_rho inverse missing");
    return detail::series_over_arrivals(rho.g_rho_inverse, rho.total_mass, rng, tol,
                                        /*exponential_weights=*/true);
}

// Finite series for the compound Poisson law with intensity beta whose jump
// sizes have the Laplace transform of dG as survival function:
//   X = sum_k J_k / G^{-1}(tau_k / beta) 1{tau_k <= beta}.
inline SeriesSample sample_cp_from_G(double beta,
                                     const std::function<double(double)>& G_inverse,
                                     RngStream& rng) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("sample_cp_from_G: beta must be in (0, inf)");
    SeriesSample s;
    double tau = rng.exponential();
    while (tau <= beta) {
        s.value += rng.exponential() / G_inverse(tau / beta);
        ++s.terms_used;
        tau += rng.exponential();
    }
    return s;
}

namespace detail {

// Expected mass of post-T firings of the Poisson-series representation,
//   (1/q) int_T^inf int_0^{a(s)} z (1-e^{-z}) nu(dz) ds,
// a(s) = -log(1 - q/s); evaluated by nested quadrature at checkpoints.
inline double lepage_id_tail(const LevyMeasure& nu, double q, double T) {
    auto S = nu.survival;
    auto V = [&S](double a) {
        if (!(a > 0.0)) return 0.0;
        const double Sa = S(a);
        auto integrand = [&](double z) {
            const double hp = -std::expm1(-z) + z * std::exp(-z);
            return hp * (S(z) - Sa);
        };
        return integrate_adaptive(integrand, 0.0, a, 1e-8).value;
    };
    auto h = [&](double s) {
        // Callers integrate from T >= 4q, so q/s stays well below 1.
        const double r = std::min(q / s, 1.0 - 1e-12);
        return V(-std::log1p(-r)) / q;
    };
    return integrate_adaptive(h, T, kInf, 1e-6).value;
}

}  // namespace detail

// Poisson-series representation of an infinitely divisible law:
//   L_1 = sum_k Z_k 1{(eps_1+...+eps_k)(1-e^{-Z_k}) <= Psi(1)},
// Z_k iid from (1-e^{-z}) nu(dz) / Psi(1). Exact stop when the jump support
// is bounded away from zero; otherwise stops when the expected mass of
// future firings drops below tol.
inline SeriesSample sample_id_lepage(const LevyMeasure& nu, RngStream& rng,
                                     double tol = 1e-6,
                                     std::function<double(RngStream&)> z_sampler = {}) {
    LevyMeasure meas = make_levy(nu);
    const double kappa = meas.atom_at_infinity;
    const double q =
        kappa + integrate_adaptive(
                    [&](double t) { return std::exp(-t) * (meas.survival(t) - kappa); },
                    0.0, kInf, 1e-10)
                    .value;  // Psi(1)
    if (!z_sampler) {
        if (!std::isfinite(meas.total_mass))
            throw ZSamplerUnavailable(
                "sample_id_lepage: need a Z sampler for infinite Levy mass");
        LevyMeasure proposal = meas;
        z_sampler = [proposal](RngStream& r) {
            for (;;) {
                const double z = sample_jump(proposal, r);
                const double acc = std::isinf(z) ? 1.0 : -std::expm1(-z);
                if (r.uniform() <= acc) return z;
            }
        };
    }
    SeriesSample s;
    const double zmin = meas.support_lower;
    const double stop_at = zmin > 0.0 ? q / (-std::expm1(-zmin)) : kInf;
    double next_check = 4.0 * q;
    double tau = rng.exponential();
    for (;;) {
        if (tau > stop_at) return s;
        if (std::isinf(stop_at) && tau >= next_check) {
            const double tail = detail::lepage_id_tail(meas, q, tau);
            if (tail <= tol) {
                s.exact = false;
                s.truncation_error_bound = tail;
                return s;
            }
            next_check = 2.0 * tau;
        }
        const double z = z_sampler(rng);
        const double w = std::isinf(z) ? 1.0 : -std::expm1(-z);
        if (tau * w <= q) {
            s.value += z;
            ++s.terms_used;
        }
        tau += rng.exponential();
        if (s.terms_used > 200000000)
            throw NonConvergence("sample_id_lepage: no termination", s.value, kInf,
                                 static_cast<std::int64_t>(s.terms_used));
    }
}

}  // namespace idtsim
