#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "idtsim/verify.hpp"

using namespace idtsim;

TEST_CASE("empirical_bernstein: all-zero samples give the zero function") {
    std::vector<double> samples(100, 0.0);
    auto est = empirical_bernstein(samples, {0.5, 1.0, 4.0});
    for (const auto& e : est) {
        REQUIRE(e.estimate == Catch::Approx(0.0).margin(1e-15));
        REQUIRE(e.std_error == Catch::Approx(0.0).margin(1e-15));
    }
}

TEST_CASE("empirical_bernstein: constant samples give c x") {
    std::vector<double> samples(50, 0.7);
    auto est = empirical_bernstein(samples, {0.5, 1.0, 3.0});
    REQUIRE(est[0].estimate == Catch::Approx(0.35).epsilon(1e-12));
    REQUIRE(est[1].estimate == Catch::Approx(0.7).epsilon(1e-12));
    REQUIRE(est[2].estimate == Catch::Approx(2.1).epsilon(1e-12));
}

TEST_CASE("empirical_bernstein: infinite samples contribute zero mass") {
    std::vector<double> samples{0.0, 0.0, kInf, kInf};
    auto est = empirical_bernstein(samples, {1.0});
    // mean of exp(-x s) = 1/2, so the estimate is log 2.
    REQUIRE(est[0].estimate == Catch::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("empirical_bernstein: throws when all samples are infinite") {
    std::vector<double> samples{kInf, kInf};
    REQUIRE_THROWS_AS(empirical_bernstein(samples, {1.0}), AllInfinite);
}

TEST_CASE("ks_two_sample: identical samples give statistic zero") {
    std::vector<double> a{0.1, 0.4, 0.9, 1.7};
    auto r = ks_two_sample(a, a);
    REQUIRE(r.statistic == 0.0);
    REQUIRE(r.p_value == Catch::Approx(1.0));
}

TEST_CASE("ks_uniform: equidistant grid has statistic at most 1/n") {
    const int n = 1000;
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i)
        u[static_cast<std::size_t>(i)] = (i + 0.5) / n;
    auto r = ks_uniform(u);
    REQUIRE(r.statistic <= 1.0 / n + 1e-12);
}

TEST_CASE("ks tests: calibrated on genuine uniforms and exponentials") {
    RngStream rng(123);
    const int n = 20000;
    std::vector<double> u(n), a(n), b(n);
    for (int i = 0; i < n; ++i) {
        u[static_cast<std::size_t>(i)] = rng.uniform();
        a[static_cast<std::size_t>(i)] = rng.exponential();
        b[static_cast<std::size_t>(i)] = rng.exponential();
    }
    REQUIRE(ks_uniform(u).p_value > 0.01);
    REQUIRE(ks_two_sample(a, b).p_value > 0.01);
}

TEST_CASE("ks_two_sample: detects a clear shift") {
    RngStream rng(5);
    const int n = 5000;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        a[static_cast<std::size_t>(i)] = rng.exponential();
        b[static_cast<std::size_t>(i)] = rng.exponential() + 0.2;
    }
    REQUIRE(ks_two_sample(a, b).p_value < 0.01);
}

TEST_CASE("exp_rate_test: matches the declared rate") {
    RngStream rng(7);
    const int n = 20000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] = rng.exponential() / 2.0;
    REQUIRE(exp_rate_test(xs, 2.0).pass);
    REQUIRE_FALSE(exp_rate_test(xs, 1.0).pass);
}

TEST_CASE("run_suite: german-linear smoke suite passes and is deterministic") {
    SuiteConfig cfg;
    cfg.n = 2000;
    cfg.seed = 1;
    cfg.dims = {2};
    auto rep1 = run_suite("german-linear", {}, cfg);
    auto rep2 = run_suite("german-linear", {}, cfg);
    REQUIRE(rep1.overall_pass);
    REQUIRE(report_to_json(rep1) == report_to_json(rep2));
    REQUIRE(report_to_csv(rep1) == report_to_csv(rep2));
    REQUIRE(!rep1.checks.empty());
}

TEST_CASE("run_suite: bondesson-45 includes the Bernstein curve check") {
    SuiteConfig cfg;
    cfg.n = 4000;
    cfg.seed = 1;
    auto rep = run_suite("bondesson-45", {}, cfg);
    bool found = false;
    for (const auto& c : rep.checks)
        if (c.name == "bernstein-curve-x1-20") found = true;
    REQUIRE(found);
    REQUIRE(rep.overall_pass);
}

TEST_CASE("VerificationReport: empty check list passes vacuously") {
    VerificationReport rep;
    rep.model_id = "empty";
    rep.finalize();
    REQUIRE(rep.overall_pass);
}

TEST_CASE("VerificationReport: a failed closed-form check fails the suite") {
    VerificationReport rep;
    rep.checks.push_back({"closed", 1.0, 0.5, false, 1, 1, false, "oracle"});
    for (int i = 0; i < 40; ++i)
        rep.checks.push_back({"mc", 0.0, 1.0, true, 1, 1, true, "oracle"});
    rep.finalize();
    REQUIRE_FALSE(rep.overall_pass);

    VerificationReport rep2;
    for (int i = 0; i < 40; ++i)
        rep2.checks.push_back({"mc", 0.0, 1.0, true, 1, 1, true, "oracle"});
    rep2.checks.push_back({"mc-fail", 9.0, 1.0, false, 1, 1, true, "oracle"});
    rep2.finalize();
    REQUIRE(rep2.overall_pass);  // 40/41 > 95% of MC checks
}

TEST_CASE("report serialization: CSV has the documented schema") {
    VerificationReport rep;
    rep.model_id = "m";
    rep.seed = 9;
    rep.checks.push_back({"alpha", 0.25, 1.0, true, 100, 9, true, "oracle"});
    rep.finalize();
    const std::string csv = report_to_csv(rep);
    REQUIRE(csv.rfind("check,statistic,threshold,pass,n,seed\n", 0) == 0);
    REQUIRE(csv.find("alpha,0.25,1,1,100,9") != std::string::npos);
    const std::string json = report_to_json(rep);
    REQUIRE(json.find("\"model_id\": \"m\"") != std::string::npos);
    REQUIRE(json.find("\"overall_pass\": true") != std::string::npos);
}
