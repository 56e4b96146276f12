#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "idtsim/bernstein.hpp"
#include "idtsim/families.hpp"
#include "idtsim/numerics.hpp"
#include "idtsim/rng.hpp"

using namespace idtsim;

namespace {

// Quadrature-only Psi_F, independent of any registered closed form.
double psi_quadrature_oracle(const DistributionF& f, double x) {
    DistributionF plain = f;
    plain.psi = nullptr;
    return psi_from_distribution(plain).eval(x);
}

struct NamedF {
    const char* name;
    DistributionF f;
};

std::vector<NamedF> catalog_distributions() {
    return {
        {"levy-bernoulli", levy_bernoulli_F()},
        {"german-linear", german_linear_F()},
        {"german-exp", german_exp_F()},
        {"frechet-0.5", frechet_F(0.5)},
        {"galambos", galambos_F()},
        {"molchanov-floor", molchanov_floor_F()},
        {"molchanov-exp", molchanov_exp_F()},
        {"bondesson-45", distribution_from_stieltjes(bondesson_45().rho)},
        {"bondesson-33", distribution_from_stieltjes(bondesson_33(1.0).rho)},
    };
}

}  // namespace

TEST_CASE("psi_from_distribution: Bernoulli-exp gives 1-e^-x") {
    auto f = levy_bernoulli_F();
    REQUIRE(psi_quadrature_oracle(f, 1.0) ==
            Catch::Approx(1.0 - std::exp(-1.0)).margin(1e-9));
    REQUIRE(psi_from_distribution(f).eval(1.0) ==
            Catch::Approx(0.632121).margin(1e-6));
}

TEST_CASE("psi_from_distribution: Psi_F(0) = 0 for catalog families") {
    for (const auto& [name, f] : catalog_distributions()) {
        INFO(name);
        REQUIRE(psi_from_distribution(f).eval(0.0) == 0.0);
    }
}

TEST_CASE("psi_from_distribution: F=min{exp(x-1),1} at x=1") {
    auto f = german_exp_F();
    REQUIRE(psi_from_distribution(f).eval(1.0) ==
            Catch::Approx(0.367879).margin(1e-6));
    REQUIRE(psi_quadrature_oracle(f, 1.0) ==
            Catch::Approx(std::exp(-1.0)).margin(1e-9));
}

TEST_CASE("psi_from_distribution: Levy measure survival is F^-1(exp(-t))") {
    auto f = german_linear_F();
    auto psi = psi_from_distribution(f);
    for (double t : {0.1, 0.5, 1.0, 3.0}) {
        REQUIRE(psi.levy.survival(t) == Catch::Approx(std::exp(-t)).margin(1e-12));
    }
    REQUIRE(psi.bounded);
    REQUIRE_FALSE(psi.killing);
}

TEST_CASE("distribution_from_levy: point mass at one gives the Bernoulli-exp cdf") {
    auto nu = standard_poisson_subordinator().levy;
    auto f = distribution_from_levy(nu);
    REQUIRE(f.cdf(0.0) == Catch::Approx(std::exp(-1.0)));
    REQUIRE(f.cdf(0.999) == Catch::Approx(std::exp(-1.0)));
    REQUIRE(f.cdf(1.0) == 1.0);
    REQUIRE(f.cdf_left(1.0) == Catch::Approx(std::exp(-1.0)));
    // Oracle: quadrature Psi of the reconstructed F equals 1-e^-x.
    for (double x : {0.5, 1.0, 2.0}) {
        REQUIRE(psi_quadrature_oracle(f, x) ==
                Catch::Approx(1.0 - std::exp(-x)).margin(1e-8));
    }
}

TEST_CASE("distribution_from_levy: killing atom shifts the support") {
    LevyMeasure nu;
    nu.survival = [](double t) { return 0.5 + std::exp(-t); };
    nu.survival_inverse = [](double y) {
        return y >= 1.5 ? 0.0 : (y <= 0.5 ? kInf : -std::log(y - 0.5));
    };
    nu.atom_at_infinity = 0.5;
    nu.total_mass = 1.5;
    auto f = distribution_from_levy(make_levy(nu));
    REQUIRE(f.cdf(0.3) == 0.0);
    REQUIRE(f.cdf(0.49999) == 0.0);
    REQUIRE(f.left_support == Catch::Approx(0.5));
    REQUIRE(f.cdf(0.8) > 0.0);
}

TEST_CASE("distribution_from_levy: unit-exponential jumps give F=min{t,1}") {
    auto nu = unit_exp_cp_subordinator().levy;
    auto f = distribution_from_levy(nu);
    for (double t : {0.1, 0.4, 0.75, 0.999}) {
        REQUIRE(f.cdf(t) == Catch::Approx(t).margin(1e-12));
    }
    REQUIRE(f.cdf(1.5) == 1.0);
    // Cross-check Psi(y) = y/(y+1).
    for (double y : {0.5, 1.0, 2.0}) {
        REQUIRE(psi_quadrature_oracle(f, y) ==
                Catch::Approx(y / (y + 1.0)).margin(1e-8));
    }
}

TEST_CASE("levy_from_distribution: german-linear gives exp survival") {
    auto nu = levy_from_distribution(german_linear_F());
    for (double t : {0.2, 1.0, 2.5}) {
        REQUIRE(nu.survival(t) == Catch::Approx(std::exp(-t)).margin(1e-12));
    }
    auto back = distribution_from_levy(nu);
    for (int i = 1; i < 100; ++i) {
        const double x = 1.2 * i / 100.0;
        REQUIRE(std::abs(back.cdf(x) - german_linear_F().cdf(x)) < 1e-10);
    }
}

TEST_CASE("levy_from_distribution: Frechet survival is c^theta t^-theta") {
    const double theta = 0.5;
    auto f = frechet_F(theta);
    const double c = std::exp(-std::lgamma(1.0 - theta) / theta);
    auto nu = levy_from_distribution(f);
    for (double t : {0.5, 1.0, 4.0}) {
        REQUIRE(nu.survival(t) ==
                Catch::Approx(std::pow(c, theta) * std::pow(t, -theta)).epsilon(1e-10));
    }
    // Quadrature Psi_F against the x^theta closed form.
    for (double x : {0.5, 1.0, 3.0}) {
        REQUIRE(psi_quadrature_oracle(f, x) ==
                Catch::Approx(std::pow(x, theta)).epsilon(1e-7));
    }
}

TEST_CASE("levy_from_distribution: positive left support becomes the killing atom") {
    DistributionF f;
    f.cdf = [](double x) { return std::min(std::max((x - 0.3) / 0.7, 0.0), 1.0); };
    f.left_support = 0.3;
    f.right_support = 1.0;
    f = make_distribution(std::move(f));
    auto nu = levy_from_distribution(f);
    REQUIRE(nu.atom_at_infinity == Catch::Approx(0.3));
    REQUIRE(nu.jump_mean == kInf);
}

TEST_CASE("stieltjes_from_distribution: german-linear g is exp(-x)") {
    auto rho = stieltjes_from_distribution(german_linear_F());
    for (double x : {0.2, 1.0, 3.0}) {
        REQUIRE(rho.g_rho(x) == Catch::Approx(std::exp(-x)).margin(1e-12));
    }
    REQUIRE(rho.total_mass == Catch::Approx(1.0));

    // Oracle: int x/(x+u) rho(du) must equal Psi_H of (F, unit-exp CP).
    auto ginv = rho.g_rho_inverse;
    for (double x : {0.5, 1.0, 2.0}) {
        auto stieltjes_form = integrate_adaptive(
            [x, &ginv](double p) {
                const double u = 1.0 / ginv(p);  // quantile of rho
                return x / (x + u);
            },
            0.0, rho.total_mass, 1e-10);
        const double onerepr = integrate_adaptive(
                                   [x](double s) {
                                       const double w = -x * std::log(std::min(s, 1.0));
                                       return w / (w + 1.0);
                                   },
                                   0.0, 1.0, 1e-10)
                                   .value;
        REQUIRE(stieltjes_form.value == Catch::Approx(onerepr).epsilon(1e-7));
    }
}

TEST_CASE("stieltjes_from_distribution: Frechet reciprocal tail") {
    const double theta = 0.5;
    auto rho = stieltjes_from_distribution(frechet_F(theta));
    const double c = std::exp(-std::lgamma(1.0 - theta) / theta);
    for (double x : {0.5, 2.0}) {
        REQUIRE(rho.g_rho(x) ==
                Catch::Approx(std::pow(c, theta) * std::pow(x, -theta)).epsilon(1e-10));
    }
}

TEST_CASE("stieltjes_from_distribution: rejects killed F") {
    DistributionF f;
    f.cdf = [](double x) { return std::min(std::max((x - 0.3) / 0.7, 0.0), 1.0); };
    f.left_support = 0.3;
    f.right_support = 1.0;
    f = make_distribution(std::move(f));
    REQUIRE_THROWS_AS(stieltjes_from_distribution(f), NotInFhat);
}

TEST_CASE("distribution_from_stieltjes: family 45 closed pieces") {
    auto fam = bondesson_45();
    auto f = distribution_from_stieltjes(fam.rho);
    for (double x : {0.05, 0.2, 0.4, 0.49}) {
        const double expected = std::exp(-1.0 / (1.0 - std::sqrt(1.0 - 2.0 * x)));
        REQUIRE(f.cdf(x) == Catch::Approx(expected).epsilon(1e-12));
    }
    REQUIRE(f.cdf(0.5) == 1.0);
    REQUIRE(f.cdf_left(0.5) == Catch::Approx(std::exp(-1.0)));
    REQUIRE(f.right_support == Catch::Approx(0.5));
}

TEST_CASE("distribution_from_stieltjes: family 33 at theta=1") {
    auto f = distribution_from_stieltjes(bondesson_33(1.0).rho);
    for (double x : {0.3, 1.0, 2.5}) {
        REQUIRE(f.cdf(x) ==
                Catch::Approx(std::exp(-1.0 / std::expm1(x))).epsilon(1e-12));
    }
}

TEST_CASE("distribution_from_stieltjes: zero total mass is rejected") {
    StieltjesMeasure rho;
    rho.g_rho = [](double) { return 0.0; };
    rho.g_rho_inverse = [](double) { return 0.0; };
    rho.total_mass = 0.0;
    REQUIRE_THROWS_AS(distribution_from_stieltjes(rho), Error);
}

TEST_CASE("round trip F -> nu_F -> F within 1e-9 for all catalog families") {
    for (const auto& [name, f] : catalog_distributions()) {
        INFO(name);
        auto back = distribution_from_levy(levy_from_distribution(f));
        const double hi = std::isfinite(f.right_support) ? 1.1 * f.right_support : 20.0;
        for (int i = 1; i <= 1000; ++i) {
            const double x = hi * i / 1000.0;
            REQUIRE(std::abs(back.cdf(x) - f.cdf(x)) < 1e-9);
        }
    }
}

TEST_CASE("round trip F -> rho_F -> F within 1e-9 for zero-left-support families") {
    for (const auto& [name, f] : catalog_distributions()) {
        INFO(name);
        auto back = distribution_from_stieltjes(stieltjes_from_distribution(f));
        const double hi = std::isfinite(f.right_support) ? 1.1 * f.right_support : 20.0;
        for (int i = 1; i <= 1000; ++i) {
            const double x = hi * i / 1000.0;
            REQUIRE(std::abs(back.cdf(x) - f.cdf(x)) < 1e-9);
        }
    }
}

TEST_CASE("closed Psi_F matches quadrature at the standard grid") {
    for (const auto& [name, f] : catalog_distributions()) {
        if (!f.psi) continue;
        INFO(name);
        for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0}) {
            const double closed = f.psi(x);
            const double quad = psi_quadrature_oracle(f, x);
            REQUIRE(std::abs(closed - quad) <= 1e-6 * std::max(closed, 1e-12));
        }
    }
}

TEST_CASE("concavity of produced Bernstein functions") {
    for (const auto& [name, f] : catalog_distributions()) {
        INFO(name);
        auto psi = psi_from_distribution(f);
        std::vector<double> grid;
        for (int i = 1; i <= 24; ++i) grid.push_back(0.25 * i);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            for (std::size_t j = i + 1; j < grid.size(); ++j) {
                const double mid = 0.5 * (grid[i] + grid[j]);
                REQUIRE(psi.eval(mid) >=
                        0.5 * (psi.eval(grid[i]) + psi.eval(grid[j])) - 1e-10);
            }
        }
    }
}

TEST_CASE("Psi(d y) <= d Psi(y) subadditivity bound") {
    auto psi = psi_from_distribution(german_exp_F());
    for (int d : {2, 3, 5, 8}) {
        for (double y : {0.3, 1.0, 4.0}) {
            REQUIRE(psi.eval(d * y) <= d * psi.eval(y) + 1e-12);
        }
    }
}

TEST_CASE("power sampler matches F^z (KS for continuous, mean for atomic)") {
    RngStream rng(99);
    const int n = 20000;

    // Continuous: german-linear, z = 2 has cdf x^2 on [0,1].
    {
        auto f = german_linear_F();
        std::vector<double> xs(n);
        for (int i = 0; i < n; ++i) xs[i] = f.power_sampler(2.0, rng);
        std::sort(xs.begin(), xs.end());
        double d = 0.0;
        for (int i = 0; i < n; ++i) {
            const double c = xs[i] * xs[i];
            d = std::max(d, std::abs((i + 1.0) / n - c));
            d = std::max(d, std::abs(c - static_cast<double>(i) / n));
        }
        REQUIRE(d < 1.63 / std::sqrt(static_cast<double>(n)));  // 1% KS band
    }

    // Atomic: levy-bernoulli, z = 1.7: E[X] = 1 - e^-z.
    {
        auto f = levy_bernoulli_F();
        const double z = 1.7;
        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += f.power_sampler(z, rng);
        mean /= n;
        const double truth = 1.0 - std::exp(-z);
        REQUIRE(mean == Catch::Approx(truth).margin(4.0 / std::sqrt(1.0 * n)));
    }
}

TEST_CASE("levy integrability check: int min(u,1) nu(du) finite") {
    auto nu = unit_exp_cp_subordinator().levy;
    auto r = integrate_adaptive([&nu](double t) { return nu.survival(t); }, 0.0, 1.0,
                                1e-10);
    REQUIRE(r.value == Catch::Approx(1.0 - std::exp(-1.0)).margin(1e-9));
}

TEST_CASE("rescale_distribution: closed forms scale consistently") {
    auto f = german_linear_F();
    auto g = rescale_distribution(f, 2.0);
    REQUIRE(g.cdf(0.25) == Catch::Approx(0.5));
    REQUIRE(g.mean == Catch::Approx(0.25));
    REQUIRE(g.right_support == Catch::Approx(0.5));
    REQUIRE(g.psi(1.0) == Catch::Approx(0.25));
    REQUIRE(g.inverse(0.5) == Catch::Approx(0.25));
    // Quadrature of the rescaled cdf agrees with the scaled closed form.
    REQUIRE(psi_quadrature_oracle(g, 3.0) ==
            Catch::Approx(f.psi(3.0) / 2.0).margin(1e-9));
}
