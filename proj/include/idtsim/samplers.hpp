#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

#include "idtsim/bernstein.hpp"
#include "idtsim/core.hpp"
#include "idtsim/idt_model.hpp"
#include "idtsim/numerics.hpp"
#include "idtsim/rng.hpp"

namespace idtsim {

// One simulated path. jump_times/jump_values hold the driving point pairs
// (Poisson epochs and their marks); the evaluator folds them into t -> H_t.
// evaluator(0) = 0, non-decreasing and right-continuous by construction.
struct PathSample {
    std::vector<double> jump_times;
    std::vector<double> jump_values;
    double horizon = 0.0;
    bool exact = true;
    double truncation_error_bound = 0.0;
    std::function<double(double)> evaluator;

    double operator()(double t) const { return evaluator ? evaluator(t) : 0.0; }
};

namespace detail {

// Exact compound Poisson point set on [0, horizon]: Poisson count, uniform
// order statistics for the epochs, inverse-survival draws for the sizes.
inline void cp_points(const BernsteinFunction& L, double horizon, RngStream& rng,
                      std::vector<double>& times, std::vector<double>& values) {
    const double beta = L.levy.total_mass;
    const std::uint64_t n = rng.poisson(beta * horizon);
    times.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) times[i] = horizon * rng.uniform();
    std::sort(times.begin(), times.end());
    values.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) values[i] = sample_jump(L.levy, rng);
}

}  // namespace detail

// Exact path of a compound Poisson subordinator on [0, horizon]. A draw
// below the killing atom produces an infinite jump (absorption).
inline PathSample sample_levy_path_cp(const BernsteinFunction& L, double horizon,
                                      RngStream& rng) {
    if (!L.bounded)
        throw NotCompoundPoisson("sample_levy_path_cp: Psi_L is unbounded");
    if (!(horizon >= 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("sample_levy_path_cp: horizon must be finite");
    PathSample path;
    path.horizon = horizon;
    detail::cp_points(L, horizon, rng, path.jump_times, path.jump_values);
    std::vector<double> times = path.jump_times;
    std::vector<double> cumsum(times.size());
    std::partial_sum(path.jump_values.begin(), path.jump_values.end(), cumsum.begin());
    path.evaluator = [times = std::move(times), cumsum = std::move(cumsum)](double t) {
        const auto it = std::upper_bound(times.begin(), times.end(), t);
        const auto idx = static_cast<std::size_t>(it - times.begin());
        return idx == 0 ? 0.0 : cumsum[idx - 1];
    };
    return path;
}

// Direct Riemann-Stieltjes construction: simulate L on [0, u_F * horizon]
// and evaluate H_t = sum -log F(tau_k / t -) J_k. Exact when u_F < inf;
// otherwise the L-path is truncated at T* with the expected tail
// contribution bounded by tol (requires finite jump mean and integrable
// -log F).
inline PathSample sample_H_direct(const IdtModel& m, double horizon, RngStream& rng,
                                  double tol = 1e-6) {
    if (!m.L.bounded)
        throw NotCompoundPoisson("sample_H_direct: L is not compound Poisson");
    const double uF = m.F.right_support;
    PathSample path;
    path.horizon = horizon;
    double t_star;
    if (std::isfinite(uF)) {
        t_star = uF * horizon;
    } else {
        const double beta = m.L.levy.total_mass;
        const double jmean = m.L.levy.jump_mean;
        if (!std::isfinite(jmean))
            throw NonConvergence("sample_H_direct: no tail bound (infinite jump mean)",
                                 0.0, kInf, 0);
        // E[tail beyond T] = beta E[J] * horizon * G_F(T / horizon).
        const double target = tol / (beta * jmean * horizon);
        double T = std::max(horizon, 1.0);
        double g = neg_log_tail_integral(m.F, T / horizon);
        int tries = 0;
        while (g > target) {
            T *= 2.0;
            g = neg_log_tail_integral(m.F, T / horizon);
            if (++tries > 200)
                throw NonConvergence("sample_H_direct: tail bound does not shrink",
                                     0.0, g, 0);
        }
        t_star = T;
        path.exact = false;
        path.truncation_error_bound = beta * jmean * horizon * g;
    }
    detail::cp_points(m.L, t_star, rng, path.jump_times, path.jump_values);
    std::vector<double> times = path.jump_times;
    std::vector<double> values = path.jump_values;
    auto cdf_left = m.F.cdf_left;
    path.evaluator = [times = std::move(times), values = std::move(values),
                      cdf_left](double t) {
        double h = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double w = detail::neg_log(cdf_left(times[k] / t));
            h += mul_weight(w, values[k]);
        }
        return h;
    };
    return path;
}

// Sample from the tilted law Psi_F(z) nu_L(dz) / Psi_H(1). Strategies:
// registered closed form, exact rejection when Psi_F is bounded (accept
// with probability Psi_F(z)/u_F), numeric inverse-cdf bisection otherwise.
inline double sample_Z(const IdtModel& m, RngStream& rng) {
    if (m.z_sampler) return m.z_sampler(rng);
    const double uF = m.F.right_support;
    auto psiF = detail::psi_F_evaluator(m.F);
    if (m.L.bounded && std::isfinite(uF)) {
        for (;;) {
            const double z = sample_jump(m.L.levy, rng);
            const double p = std::isinf(z) ? uF : psiF(z);
            if (rng.uniform() * uF <= p) return z;
        }
    }
    // Inverse-cdf route: solve R(z) = U for the tilted survival
    // R(z) = int_{(z,inf]} Psi_F dnu_L / Psi_H(1).
    auto sinv = m.L.levy.survival_inverse;
    if (!sinv) throw ZSamplerUnavailable("sample_Z: no survival inverse for nu_L");
    auto surv = m.L.levy.survival;
    const double psi_h1 = m.psi_h1;
    auto tilted_tail = [&](double z) {
        const double q = surv(z);
        if (q <= 0.0) return 0.0;
        auto integrand = [&](double p) {
            const double u = sinv(p);
            return std::isinf(u) ? uF : psiF(u);
        };
        return integrate_adaptive(integrand, 0.0, q, 1e-9).value / psi_h1;
    };
    const double u = rng.uniform();
    MonotoneFn fn{Direction::decreasing, 0.0, kInf, tilted_tail, nullptr};
    return generalized_inverse(fn, u);
}

namespace detail {

// Expected LePage remainder once the arrival sum has reached A:
//   (c / Psi_H(1)) * int z G_F(A Psi_F(z) / c) nu_L(dz),  c = t Psi_H(1).
inline double lepage_tail_bound(const IdtModel& m,
                                const std::function<double(double)>& psiF,
                                double c, double A) {
    auto sinv = m.L.levy.survival_inverse;
    const DistributionF& F = m.F;
    auto integrand = [&](double p) {
        const double z = sinv(p);
        if (std::isinf(z)) {
            const double g = neg_log_tail_integral(F, A * F.right_support / c);
            return mul_weight(z, g);
        }
        if (z <= 0.0) return 0.0;
        return z * neg_log_tail_integral(F, A * psiF(z) / c);
    };
    const double val =
        integrate_adaptive(integrand, 0.0, m.L.levy.total_mass, 1e-7).value;
    return c / m.psi_h1 * val;
}

}  // namespace detail

// LePage series representation of H on [0, horizon]:
//   H_t = -sum_k log F((eps_1+...+eps_k) Psi_F(Z_k) / (t Psi_H(1)) -)^{Z_k}.
// The series terminates exactly when u_F < inf and the tilted Z-law is
// bounded away from zero; otherwise it stops once the expected remainder
// falls below tol and the sample is flagged approximate.
inline PathSample sample_H_lepage(const IdtModel& m, double horizon, RngStream& rng,
                                  double tol = 1e-6) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("sample_H_lepage: horizon must be in (0, inf)");
    auto psiF = detail::psi_F_evaluator(m.F);
    const double uF = m.F.right_support;
    const double psi_h1 = m.psi_h1;
    const double c = horizon * psi_h1;

    const double zmin = m.L.levy.support_lower;
    const double psiF_zmin = zmin > 0.0 ? psiF(zmin) : 0.0;
    const bool exact_stop = std::isfinite(uF) && psiF_zmin > 0.0;
    double stop_at = exact_stop ? uF * c / psiF_zmin : kInf;

    PathSample path;
    path.horizon = horizon;
    std::vector<std::pair<double, double>> terms;  // (tau' = a Psi_F(Z)/Psi_H(1), Z)
    double a = 0.0;
    double next_check = std::max(2.0 * c, 1.0);
    for (;;) {
        a += rng.exponential();
        if (a >= stop_at) break;
        if (!exact_stop && a >= next_check) {
            const double bound = detail::lepage_tail_bound(m, psiF, c, a);
            if (!std::isfinite(bound))
                throw NonConvergence("sample_H_lepage: remainder bound is not finite",
                                     0.0, bound, 0);
            if (bound <= tol) {
                path.exact = false;
                path.truncation_error_bound = bound;
                break;
            }
            next_check = 2.0 * a;
        }
        const double z = sample_Z(m, rng);
        const double psi_z = std::isinf(z) ? uF : psiF(z);
        const double tau = a * psi_z / psi_h1;
        if (tau <= uF * horizon) terms.emplace_back(tau, z);
        if (terms.size() > 100000000)
            throw NonConvergence("sample_H_lepage: series did not terminate", 0.0,
                                 kInf, 0);
    }
    std::sort(terms.begin(), terms.end());
    path.jump_times.reserve(terms.size());
    path.jump_values.reserve(terms.size());
    for (const auto& [tau, z] : terms) {
        path.jump_times.push_back(tau);
        path.jump_values.push_back(z);
    }
    std::vector<double> times = path.jump_times;
    std::vector<double> values = path.jump_values;
    auto cdf_left = m.F.cdf_left;
    path.evaluator = [times = std::move(times), values = std::move(values),
                      cdf_left](double t) {
        double h = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double w = detail::neg_log(cdf_left(times[k] / t));
            h += mul_weight(w, values[k]);
        }
        return h;
    };
    return path;
}

}  // namespace idtsim
