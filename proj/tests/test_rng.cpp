#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "lfsm/rng.hpp"
#include "lfsm/stats.hpp"

using namespace lfsm;

TEST_CASE("identical seeds give identical streams") {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("seed fan-out is pairwise distinct for 10^4 replications") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t r = 0; r < 10000; ++r) seen.insert(split_seed(1234567, r));
    REQUIRE(seen.size() == 10000);
}

TEST_CASE("uniform draws live in [0,1) and have the right first moments") {
    Rng rng(7);
    std::vector<double> u(200000);
    for (auto& x : u) {
        x = rng.uniform();
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
    }
    REQUIRE(stats::mean(u) == Catch::Approx(0.5).margin(5e-3));
    REQUIRE(stats::variance(u) == Catch::Approx(1.0 / 12.0).margin(5e-3));
}

TEST_CASE("normal draws match N(0,1) moments") {
    Rng rng(11);
    std::vector<double> z(200000);
    for (auto& x : z) x = rng.normal();
    REQUIRE(stats::mean(z) == Catch::Approx(0.0).margin(1e-2));
    REQUIRE(stats::variance(z) == Catch::Approx(1.0).margin(2e-2));
}

TEST_CASE("student-t draws have the df/(df-2) variance") {
    Rng rng(13);
    std::vector<double> z(400000);
    for (auto& x : z) x = rng.student_t(7.0);
    REQUIRE(stats::variance(z) == Catch::Approx(7.0 / 5.0).margin(4e-2));
}

TEST_CASE("kolmogorov helpers match reference values") {
    // Q(0.8275) ~ 0.5 is the median of the Kolmogorov distribution.
    REQUIRE(stats::kolmogorov_q(0.82757) == Catch::Approx(0.5).margin(1e-3));
    REQUIRE(stats::kolmogorov_q(1.6276) == Catch::Approx(0.01).margin(2e-4));
}

TEST_CASE("incomplete gamma matches chi-square reference points") {
    // P{chi2_1 > 3.8415} = 0.05, P{chi2_2 > 5.9915} = 0.05
    REQUIRE(stats::chi2_sf(3.841459, 1) == Catch::Approx(0.05).margin(1e-5));
    REQUIRE(stats::chi2_sf(5.991465, 2) == Catch::Approx(0.05).margin(1e-5));
}

TEST_CASE("quantile and iqr behave on a known sample") {
    std::vector<double> xs = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    REQUIRE(stats::median(xs) == Catch::Approx(5.5));
    REQUIRE(stats::quantile(xs, 0.25) == Catch::Approx(3.25));
    REQUIRE(stats::iqr(xs) == Catch::Approx(4.5));
}
