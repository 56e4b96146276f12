#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "idtsim/core.hpp"

namespace idtsim {

struct IntegrationResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::int64_t evaluations = 0;
    bool converged = true;
};

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule
// (QUADPACK dqk15 constants).
inline constexpr double kXgk[8] = {
    0.99145537112081263920685469752633,
    0.94910791234275852452618968404785,
    0.86486442335976907278971278864092,
    0.74153118559939443986386477328079,
    0.58608723546769113029414483825873,
    0.40584515137739716690660641207696,
    0.20778495500789846760068940377324,
    0.0};
inline constexpr double kWgk[8] = {
    0.02293532201052922496373200805897,
    0.06309209262997855329070066318921,
    0.10479001032225018383987632254152,
    0.14065325971552591874518959051024,
    0.16900472663926790282658342659855,
    0.19035057806478540991325640242101,
    0.20443294007529889241416199923466,
    0.20948214108472782801299917489171};
inline constexpr double kWg[4] = {
    0.12948496616886969327061143267908,
    0.27970539148927666790146777142378,
    0.38183005050511894495036977548898,
    0.41795918367346938775510204081633};

struct Segment {
    double a, b;
    double value;
    double error;
};

template <class F>
Segment gk15(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fv[15];
    fv[7] = f(center);
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        fv[i] = f(center - dx);
        fv[14 - i] = f(center + dx);
    }
    double resk = kWgk[7] * fv[7];
    double resg = kWg[3] * fv[7];
    double resabs = kWgk[7] * std::abs(fv[7]);
    for (int i = 0; i < 7; ++i) {
        const double fsum = fv[i] + fv[14 - i];
        resk += kWgk[i] * fsum;
        resabs += kWgk[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
        if (i % 2 == 1) resg += kWg[i / 2] * fsum;
    }
    // QUADPACK dqk15 error estimate: scale |K - G| by the local variation
    // resasc so that discontinuities are not under-reported.
    const double reskh = resk * 0.5;
    double resasc = kWgk[7] * std::abs(fv[7] - reskh);
    for (int i = 0; i < 7; ++i)
        resasc += kWgk[i] * (std::abs(fv[i] - reskh) + std::abs(fv[14 - i] - reskh));
    const double value = resk * half;
    resasc *= std::abs(half);
    resabs *= std::abs(half);
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    err = std::max(err, 50.0 * 1.1e-16 * resabs);
    return {a, b, value, err};
}

template <class F>
IntegrationResult adaptive_finite(const F& f, double lo, double hi, double rel_tol,
                                  int max_segments) {
    IntegrationResult res;
    if (lo == hi) {
        res.evaluations = 1;
        return res;
    }
    std::vector<Segment> segs;
    segs.reserve(64);
    segs.push_back(gk15(f, lo, hi));
    std::int64_t evals = 15;
    for (;;) {
        double total = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            total += segs[i].value;
            err += segs[i].error;
            if (segs[i].error > segs[worst].error) worst = i;
        }
        const double tol = std::max(rel_tol * std::abs(total), 1e-12);
        if (err <= tol) {
            res.value = total;
            res.abs_error_estimate = err;
            res.evaluations = evals;
            return res;
        }
        const Segment s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        const bool splittable = mid > s.a && mid < s.b &&
                                static_cast<int>(segs.size()) < max_segments;
        if (!splittable) {
            res.value = total;
            res.abs_error_estimate = err;
            res.evaluations = evals;
            res.converged = false;
            throw NonConvergence("integrate_adaptive: tolerance not reached",
                                 total, err, evals);
        }
        segs[worst] = gk15(f, s.a, mid);
        segs.push_back(gk15(f, mid, s.b));
        evals += 30;
    }
}

}  // namespace detail

// Adaptive quadrature of f on (lo, hi), hi may be +inf. Semi-infinite
// domains are mapped to (0,1) via s = lo + expm1(u/(1-u)), which keeps the
// transformed integrand bounded for integrands with power-law or faster
// decay. Throws NonConvergence (with the partial result attached) if the
// error estimate stays above tolerance at the segment cap.
template <class F>
IntegrationResult integrate_adaptive(F&& f, double lo, double hi,
                                     double rel_tol = 1e-8,
                                     int max_segments = 4000) {
    if (!(rel_tol > 0.0) || rel_tol > 1e-2)
        throw std::invalid_argument("integrate_adaptive: rel_tol outside (0, 1e-2]");
    if (std::isfinite(hi)) {
        return detail::adaptive_finite(f, lo, hi, rel_tol, max_segments);
    }
    auto g = [&f, lo](double u) -> double {
        const double w = u / (1.0 - u);
        if (w > 708.0) return 0.0;  // integrand must vanish beyond s ~ 1e307
        const double s = lo + std::expm1(w);
        const double jac = std::exp(w) / ((1.0 - u) * (1.0 - u));
        const double fs = f(s);
        if (fs == 0.0) return 0.0;
        return fs * jac;
    };
    return detail::adaptive_finite(g, 0.0, 1.0, rel_tol, max_segments);
}

// Sum of adaptive integrals over consecutive pieces split at known
// breakpoints (kinks of the integrand). Breakpoints outside (lo, hi) are
// ignored; the final piece may be semi-infinite.
template <class F>
IntegrationResult integrate_adaptive_split(F&& f, double lo, double hi,
                                           std::vector<double> breaks,
                                           double rel_tol = 1e-8) {
    std::sort(breaks.begin(), breaks.end());
    IntegrationResult total;
    double a = lo;
    for (double b : breaks) {
        if (!(b > a) || !(b < hi)) continue;
        IntegrationResult piece = integrate_adaptive(f, a, b, rel_tol);
        total.value += piece.value;
        total.abs_error_estimate += piece.abs_error_estimate;
        total.evaluations += piece.evaluations;
        a = b;
    }
    IntegrationResult piece = integrate_adaptive(f, a, hi, rel_tol);
    total.value += piece.value;
    total.abs_error_estimate += piece.abs_error_estimate;
    total.evaluations += piece.evaluations;
    return total;
}

enum class Direction { increasing, decreasing };

// A monotone callable on a subinterval of [0, inf], optionally carrying a
// registered closed-form inverse.
struct MonotoneFn {
    Direction direction = Direction::increasing;
    double lo = 0.0;
    double hi = kInf;
    std::function<double(double)> eval;
    std::function<double(double)> inverse;  // optional closed form
};

// Generalized inverse with the inf convention: for increasing g returns
// inf{x : g(x) >= y}, for decreasing g returns inf{x : g(x) <= y}. Uses the
// registered inverse when present, otherwise bisection to absolute
// tolerance 1e-12 in x. Throws OutOfRange when y lies outside the closure
// of g's range.
inline double generalized_inverse(const MonotoneFn& g, double y) {
    if (g.inverse) return g.inverse(y);
    const bool inc = g.direction == Direction::increasing;
    auto ok = [&](double x) {
        const double v = g.eval(x);
        return inc ? v >= y : v <= y;
    };

    const double at_lo = g.eval(g.lo);
    const double slack = 1e-12 * (1.0 + std::abs(y));
    if (inc && y < at_lo - slack)
        throw OutOfRange("generalized_inverse: target below range");
    if (!inc && y > at_lo + slack)
        throw OutOfRange("generalized_inverse: target above range");
    if (ok(g.lo)) return g.lo;

    double hi = g.hi;
    if (!std::isfinite(hi)) {
        hi = std::max(1.0, 2.0 * g.lo + 1.0);
        int tries = 0;
        while (!ok(hi)) {
            hi *= 2.0;
            if (++tries > 1100)
                throw OutOfRange("generalized_inverse: target outside range");
        }
    } else if (!ok(hi)) {
        // Allow a hair of floating-point slack at the range endpoint.
        const double v = g.eval(hi);
        if (std::abs(v - y) <= 1e-12 * (1.0 + std::abs(y))) return hi;
        throw OutOfRange("generalized_inverse: target outside range");
    }

    double lo = g.lo;
    // Invariant: ok(hi), !ok(lo); the inf convention picks the hi end.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (ok(mid))
            hi = mid;
        else
            lo = mid;
        if (hi - lo < 1e-12 && hi - lo < 1e-12 * (1.0 + std::abs(hi))) break;
    }
    return hi;
}

// Exponential integral E1(x) scaled by exp(x), i.e. exp(x)*E1(x), for x > 0.
// Series for small x, continued fraction otherwise.
inline double expint_e1_scaled(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("expint_e1_scaled: x must be > 0");
    if (x <= 1.0) {
        const double euler = 0.57721566490153286060651209;
        double sum = 0.0, term = 1.0;
        for (int k = 1; k <= 40; ++k) {
            term *= -x / k;
            sum += term / k;
            if (std::abs(term) < 1e-18) break;
        }
        return std::exp(x) * (-euler - std::log(x) - sum);
    }
    // Lentz continued fraction for exp(x) E1(x) = 1/(x+1-1/(x+3-4/(x+5-...))).
    double b = x + 1.0;
    double c = 1e300;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 200; ++i) {
        const double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const double delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h;
}

inline double expint_e1(double x) { return std::exp(-x) * expint_e1_scaled(x); }

// Dilogarithm restricted to arguments exp(-x) with x > 0, evaluated as the
// series sum_{m>=1} exp(-m x)/m^2.
inline double dilog_exp_neg(double x) {
    if (x <= 0.0) return 1.6449340668482264364724152;  // pi^2/6 at x = 0
    double sum = 0.0;
    const double q = std::exp(-x);
    double p = 1.0;
    for (int m = 1; m <= 100000; ++m) {
        p *= q;
        const double term = p / (static_cast<double>(m) * m);
        sum += term;
        if (term < 1e-18 * (sum + 1e-300)) break;
    }
    return sum;
}

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace idtsim
