#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "lfsm/innovations.hpp"
#include "lfsm/stats.hpp"

using namespace lfsm;

namespace {

std::complex<double> empirical_cf(const std::vector<double>& xs, double lambda) {
    double re = 0.0, im = 0.0;
    for (double x : xs) {
        re += std::cos(lambda * x);
        im += std::sin(lambda * x);
    }
    const double n = static_cast<double>(xs.size());
    return {re / n, im / n};
}

}  // namespace

TEST_CASE("gaussian draws at the canonical scale have population variance 2") {
    auto m = InnovationModel::make_gaussian();  // scale sqrt(2)
    auto xs = sample_innovations(m, 4, 7);
    REQUIRE(xs.size() == 4);
    // population variance over a large sample
    auto big = sample_innovations(m, 400000, 7);
    REQUIRE(stats::variance(big) == Catch::Approx(2.0).epsilon(0.02));
}

TEST_CASE("sampling is deterministic in (model, n, seed)") {
    auto m = InnovationModel::make_stable(1.5, 0.3);
    auto a = sample_innovations(m, 128, 99);
    auto b = sample_innovations(m, 128, 99);
    REQUIRE(a == b);
}

TEST_CASE("alpha = 1 exact-stable is symmetric Cauchy: empirical median near 0") {
    auto m = InnovationModel::make_stable(1.0);
    auto xs = sample_innovations(m, 200001, 3);
    REQUIRE(std::abs(stats::median(xs)) < 0.01);
}

TEST_CASE("alpha = 2 exact-stable is exactly the variance-2 gaussian") {
    auto m = InnovationModel::make_stable(2.0);
    auto xs = sample_innovations(m, 400000, 5);
    REQUIRE(stats::variance(xs) == Catch::Approx(2.0).epsilon(0.02));
    REQUIRE(stats::mean(xs) == Catch::Approx(0.0).margin(0.01));
}

TEST_CASE("empirical cf of alpha=1.5 draws matches exp(-|lambda|^1.5)") {
    auto m = InnovationModel::make_stable(1.5);
    auto xs = sample_innovations(m, 1000000, 17);
    const auto cf1 = empirical_cf(xs, 1.0);
    REQUIRE(cf1.real() == Catch::Approx(std::exp(-1.0)).margin(5e-3));  // ~0.3679
    REQUIRE(cf1.imag() == Catch::Approx(0.0).margin(5e-3));

    // supremum over the 21-point grid in [-3, 3]
    double sup = 0.0;
    for (int i = 0; i <= 20; ++i) {
        const double lam = -3.0 + 0.3 * i;
        sup = std::max(sup, std::abs(empirical_cf(xs, lam) - char_fn(m, lam)));
    }
    REQUIRE(sup < 5e-3);
}

TEST_CASE("skewed stable draws match the stated cf convention") {
    auto m = InnovationModel::make_stable(1.5, 0.7);
    auto xs = sample_innovations(m, 1000000, 23);
    for (double lam : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0}) {
        const auto emp = empirical_cf(xs, lam);
        const auto expect = char_fn(m, lam);
        REQUIRE(std::abs(emp - expect) < 6e-3);
    }
}

TEST_CASE("char_fn closed forms") {
    SECTION("gaussian with variance 2 at lambda = 1") {
        auto m = InnovationModel::make_gaussian();
        REQUIRE(char_fn(m, 1.0).real() == Catch::Approx(std::exp(-1.0)).epsilon(1e-12));
    }
    SECTION("any model at lambda = 0 gives 1") {
        for (auto m : {InnovationModel::make_stable(1.3, -0.4), InnovationModel::make_gaussian()}) {
            REQUIRE(char_fn(m, 0.0).real() == Catch::Approx(1.0));
            REQUIRE(char_fn(m, 0.0).imag() == Catch::Approx(0.0));
        }
    }
    SECTION("symmetric stable alpha=1.5 at lambda = 2") {
        auto m = InnovationModel::make_stable(1.5);
        REQUIRE(char_fn(m, 2.0).real() ==
                Catch::Approx(std::exp(-std::pow(2.0, 1.5))).epsilon(1e-12));  // ~0.0591
    }
    SECTION("two-point cf is cos") {
        InnovationModel m;
        m.family = Family::two_point;
        m.scale_cal = 1.5;
        REQUIRE(char_fn(m, 2.0).real() == Catch::Approx(std::cos(3.0)).epsilon(1e-12));
    }
}

TEST_CASE("cf symmetry and bounds on a grid") {
    auto sym = InnovationModel::make_stable(1.2);
    auto skw = InnovationModel::make_stable(1.7, 0.5);
    for (int i = -20; i <= 20; ++i) {
        const double lam = 0.35 * i;
        REQUIRE(char_fn(sym, lam).imag() == 0.0);  // skew-0 cf is real
        REQUIRE(std::abs(char_fn(skw, lam)) <= 1.0 + 1e-12);
        const auto a = char_fn(skw, -lam);
        const auto b = std::conj(char_fn(skw, lam));
        REQUIRE(a.real() == Catch::Approx(b.real()).margin(1e-14));
        REQUIRE(a.imag() == Catch::Approx(b.imag()).margin(1e-14));
    }
}

TEST_CASE("student-t odd-df cf matches the empirical cf") {
    InnovationModel m;
    m.family = Family::student_t;
    m.df = 5.0;
    m.scale_cal = 1.0;
    auto xs = sample_innovations(m, 1000000, 31);
    for (double lam : {0.5, 1.0, 2.0}) {
        REQUIRE(std::abs(empirical_cf(xs, lam) - char_fn(m, lam)) < 6e-3);
    }
    m.df = 4.0;  // even df: no elementary closed form
    REQUIRE_THROWS_AS(char_fn(m, 1.0), UnsupportedError);
}

TEST_CASE("calibrate_norming") {
    SECTION("exact-stable is already normalized") {
        auto rho = calibrate_norming(InnovationModel::make_stable(1.5));
        REQUIRE(rho(1) == 1.0);
        REQUIRE(rho(1000) == 1.0);
    }
    SECTION("gaussian at canonical scale") {
        auto rho = calibrate_norming(InnovationModel::make_gaussian());
        REQUIRE(rho(10) == Catch::Approx(1.0).epsilon(1e-14));
    }
    SECTION("student-t(5) matches the variance-2 limit") {
        InnovationModel m;
        m.family = Family::student_t;
        m.df = 5.0;
        auto rho = calibrate_norming(m);
        REQUIRE(rho(3) == Catch::Approx(std::sqrt((5.0 / 3.0) / 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("invalid models are rejected with named invariants") {
    InnovationModel m;
    m.alpha = 2.5;
    REQUIRE_THROWS_AS(m.validate(), ConfigError);
    REQUIRE_THROWS_WITH(m.validate(), Catch::Matchers::ContainsSubstring("alpha"));

    InnovationModel g;
    g.family = Family::gaussian;
    g.alpha = 1.5;
    REQUIRE_THROWS_WITH(g.validate(), Catch::Matchers::ContainsSubstring("alpha = 2"));

    InnovationModel s;
    s.scale_cal = -1.0;
    REQUIRE_THROWS_WITH(s.validate(), Catch::Matchers::ContainsSubstring("scale_cal"));

    REQUIRE(InnovationModel::make_stable(1.0, 0.9).skew == 0.0);  // forced at alpha = 1
    REQUIRE_THROWS_AS(sample_innovations(InnovationModel::make_stable(2.0), 0, 1), DomainError);
}
