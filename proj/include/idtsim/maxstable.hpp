#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "idtsim/core.hpp"
#include "idtsim/idt_model.hpp"
#include "idtsim/numerics.hpp"
#include "idtsim/rng.hpp"
#include "idtsim/samplers.hpp"

namespace idtsim {

struct SimplexPoint {
    std::vector<double> q;  // non-negative, sums to one
};

// Size-biased draw M ~ x dF^z(x) / Psi_F(z). Family closed forms first;
// bounded support falls back to accept-reject against the proposal F^z with
// acceptance probability x / u_F.
inline double sample_M(const DistributionF& F, double z, RngStream& rng) {
    if (!(z > 0.0)) throw std::invalid_argument("sample_M: z must be > 0");
    if (F.m_sampler) return F.m_sampler(z, rng);
    if (std::isfinite(F.right_support) && F.power_sampler) {
        const double uF = F.right_support;
        for (;;) {
            const double x = F.power_sampler(z, rng);
            if (rng.uniform() * uF <= x) return x;
        }
    }
    throw MSamplerUnavailable("sample_M: no strategy for this distribution");
}

// One draw from the Pickands dependence measure of the d-dimensional
// margin: D uniform, Z tilted, X_1..X_d iid from F^Z, the D-th coordinate
// replaced by the size-biased M, then projected to the simplex.
inline SimplexPoint sample_Q(const IdtModel& m, int d, RngStream& rng) {
    if (!m.normalized)
        throw std::invalid_argument("sample_Q: model must be normalized (Psi_H(1)=1)");
    if (d < 2) throw std::invalid_argument("sample_Q: d must be >= 2");
    const auto D = static_cast<std::size_t>(rng.uniform_below(static_cast<std::uint64_t>(d)));
    const double z = sample_Z(m, rng);
    std::vector<double> w(static_cast<std::size_t>(d));
    for (auto& wk : w) wk = m.F.power_sampler(z, rng);
    w[D] = sample_M(m.F, z, rng);
    double sum = 0.0;
    for (double wk : w) sum += wk;
    SimplexPoint q;
    q.q.resize(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) q.q[k] = w[k] / sum;
    // Pin the simplex constraint exactly by absorbing the rounding residue
    // into the largest coordinate.
    double total = 0.0;
    std::size_t arg = 0;
    for (std::size_t k = 0; k < q.q.size(); ++k) {
        total += q.q[k];
        if (q.q[k] > q.q[arg]) arg = k;
    }
    q.q[arg] += 1.0 - total;
    return q;
}

// Exact simulation of U ~ C_d via running maxima over a unit Poisson
// process marked with Pickands draws. Also reports the stopping index.
inline std::vector<double> sample_copula_counted(const IdtModel& m, int d,
                                                 RngStream& rng,
                                                 std::uint64_t* stopping_index) {
    std::vector<double> zmax(static_cast<std::size_t>(d), 0.0);
    double a = rng.exponential();
    std::uint64_t n = 0;
    for (;;) {
        ++n;
        const SimplexPoint q = sample_Q(m, d, rng);
        for (std::size_t j = 0; j < zmax.size(); ++j)
            zmax[j] = std::max(zmax[j], d * q.q[j] / a);
        const double a_next = a + rng.exponential();
        const double zmin = *std::min_element(zmax.begin(), zmax.end());
        if (d / a_next < zmin) break;
        a = a_next;
    }
    if (stopping_index) *stopping_index = n;
    std::vector<double> u(zmax.size());
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = std::exp(-1.0 / zmax[j]);
    return u;
}

inline std::vector<double> sample_copula(const IdtModel& m, int d, RngStream& rng) {
    return sample_copula_counted(m, d, rng, nullptr);
}

// (Y_1,...,Y_d) min-stable exponential with survival exp(-ell(t)); margins
// are unit exponential under the normalization Psi_H(1) = 1.
inline std::vector<double> sample_minstable(const IdtModel& m, int d, RngStream& rng) {
    std::vector<double> y = sample_copula(m, d, rng);
    for (double& v : y) v = -std::log(v);
    return y;
}

// Expected stopping index of the copula sampler:
//   E[M] = -d sum_{k=1}^d binom(d,k) (-1)^k / Psi_H(k),
// evaluated with compensated summation (the binomial terms alternate and
// overwhelm naive accumulation around d ~ 30).
inline double expected_stopping(const IdtModel& m, int d) {
    if (d < 1) throw std::invalid_argument("expected_stopping: d must be >= 1");
    CompensatedSum sum;
    double binom = 1.0;  // binom(d, k) via the ratio recurrence
    for (int k = 1; k <= d; ++k) {
        binom *= static_cast<double>(d - k + 1) / static_cast<double>(k);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        sum.add(sign * binom / psi_H(m, static_cast<double>(k)));
    }
    return -d * sum.value();
}

}  // namespace idtsim
