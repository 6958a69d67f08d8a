#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "lfsm/local_time.hpp"
#include "lfsm/rng.hpp"
#include "lfsm/stats.hpp"
#include "lfsm/zero_energy.hpp"

using namespace lfsm;

namespace {

/// Hand-built bundle around a fixed trajectory.
PathBundle fixed_path(std::vector<double> x, double d_n, double e_n) {
    PathBundle b;
    b.n = x.size();
    b.K = 1;
    b.x = std::move(x);
    b.v.assign(b.n, 0.0);
    b.eps.assign(b.n + 1, 0.0);
    b.coeffs = {1.0, 0.0};
    b.coeff_partial = {1.0, 1.0};
    b.d_n = d_n;
    b.e_n = e_n;
    b.spec = ProcessSpec{};
    b.model = InnovationModel::make_stable(2.0);
    return b;
}

PathBundle random_walk(std::size_t n, std::uint64_t seed) {
    return partial_sums(ProcessSpec{}, InnovationModel::make_stable(2.0), n, 1, seed);
}

}  // namespace

TEST_CASE("field value on a fixed path") {
    const double s3 = std::sqrt(3.0);
    auto b = fixed_path({0.0, 1.0, -1.0}, s3, s3);
    auto field = local_time_field(b, kernels::triangular(), 1.0, {0.0});
    // (1/sqrt(3)) (phi(0) + phi(1) + phi(-1)) = 1/sqrt(3)
    REQUIRE(field.values[0] == Catch::Approx(1.0 / s3).epsilon(1e-12));
}

TEST_CASE("mass identity") {
    auto b = random_walk(1000, 42);
    SECTION("closed form is exactly one") {
        REQUIRE(std::abs(mass_closed_form(b, kernels::triangular()) - 1.0) <= 1e-12);
    }
    SECTION("grid integral is one up to grid resolution") {
        double lo = b.x[0], hi = b.x[0];
        for (double v : b.x) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double mesh =
            0.5 * std::sqrt(1e-3 * 8.0 * b.e_n / (3.0 * static_cast<double>(b.n) * b.d_n));
        auto grid = make_grid((lo - 1.5) / b.d_n, (hi + 1.5) / b.d_n, mesh);
        auto field = local_time_field(b, kernels::triangular(), 1.0, grid);
        REQUIRE(field.trapz() == Catch::Approx(1.0).margin(1e-3));
    }
}

TEST_CASE("field linearity and nonnegativity") {
    auto b = random_walk(2048, 7);
    auto grid = make_grid(-2.0, 2.0, 0.125);
    const auto f = kernels::triangular();
    const auto g = kernels::epanechnikov();
    RealFunction combo;
    auto fe = f.eval, ge = g.eval;
    combo.eval = [fe, ge](double x) { return 2.0 * fe(x) - 0.5 * ge(x); };
    combo.window = f.window;
    combo.name = "combo";
    auto Ff = local_time_field(b, f, 1.0, grid);
    auto Fg = local_time_field(b, g, 1.0, grid);
    auto Fc = local_time_field(b, combo, 1.0, grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        REQUIRE(Ff.values[j] >= 0.0);
        REQUIRE(Fc.values[j] ==
                Catch::Approx(2.0 * Ff.values[j] - 0.5 * Fg.values[j]).margin(1e-12));
    }
}

TEST_CASE("brownian local time law at the origin (light version)") {
    const std::size_t R = 400, n = 8192;
    std::vector<double> vals(R);
    for (std::size_t r = 0; r < R; ++r) {
        auto b = random_walk(n, split_seed(2024, r));
        vals[r] = local_time_field(b, kernels::triangular(), 1.0, {0.0}).values[0];
    }
    const double target = 1.0 / std::sqrt(std::numbers::pi);  // ~0.5642
    REQUIRE(stats::mean(vals) == Catch::Approx(target).epsilon(0.07));
}

TEST_CASE("occupation cdf") {
    auto b = fixed_path({0.0, 1.0, -1.0}, 1.0, 1.0);
    SECTION("counting") {
        auto mu = occupation_cdf(b, {0.0});
        REQUIRE(mu[0] == Catch::Approx(2.0 / 3.0));
    }
    SECTION("zero below the sample minimum, one above the maximum") {
        auto mu = occupation_cdf(b, {-1.5, 1.5});
        REQUIRE(mu[0] == 0.0);
        REQUIRE(mu[1] == 1.0);
    }
    SECTION("monotone on a grid") {
        auto big = random_walk(4096, 5);
        auto mu = occupation_cdf(big, make_grid(-3.0, 3.0, 0.05));
        for (std::size_t j = 1; j < mu.size(); ++j) REQUIRE(mu[j] >= mu[j - 1]);
    }
}

TEST_CASE("occupation cdf is consistent with the integrated field") {
    auto b = random_walk(std::size_t(1) << 14, 99);
    auto grid = make_grid(-3.0, 3.0, 1.0 / 128.0);
    auto field = local_time_field(b, kernels::triangular(), 1.0, grid);
    auto mu = occupation_cdf(b, grid);
    auto cum = field.cumulative();
    // mu(grid.front()) is not exactly 0; align by adding the mass below
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j)
        worst = std::max(worst, std::abs(cum[j] + mu[0] - mu[j]));
    REQUIRE(worst <= 0.02);
}

TEST_CASE("reference local time") {
    SECTION("degenerate constant path puts all mass in one bin") {
        std::vector<double> X(100, 0.0);
        auto L = reference_local_time(X, make_grid(-1.0, 1.0, 0.25), 0.25);
        double mass = 0.0;
        for (double v : L) mass += v * 0.25;
        REQUIRE(mass == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(L[4] == Catch::Approx(1.0 / 0.25));  // the bin holding 0
    }
    SECTION("histogram mass is exactly one when the grid covers the range") {
        auto X = simulate_lfsm(0.5, 2.0, 512, 1.0, 512, 77);
        double lo = -8, hi = 8;  // brownian range at variance 2 stays inside
        auto grid = make_grid(lo, hi, 0.125);
        auto L = reference_local_time(X, grid, 0.125);
        double mass = 0.0;
        for (double v : L) mass += v * 0.125;
        REQUIRE(mass == Catch::Approx(1.0).margin(1e-12));
        for (double v : L) REQUIRE(v >= 0.0);
    }
    SECTION("mean occupation density at zero matches the brownian value") {
        const std::size_t R = 500;
        std::vector<double> l0(R);
        auto grid = make_grid(-8.0, 8.0, 0.125);
        for (std::size_t r = 0; r < R; ++r) {
            auto X = simulate_lfsm(0.5, 2.0, 1024, 1.0, 1024, split_seed(31337, r));
            auto L = reference_local_time(X, grid, 0.125);
            l0[r] = L[64];  // bin centered at 0
        }
        REQUIRE(stats::mean(l0) ==
                Catch::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(0.07));
    }
}

TEST_CASE("support sets") {
    auto b = random_walk(4096, 11);
    auto grid = make_grid(-3.0, 3.0, 1.0 / 64.0);
    auto field = local_time_field(b, kernels::epanechnikov(), 1.0, grid);
    SECTION("epsilon = 0 covers everything") {
        auto s = support_set(field, b, 0.0);
        REQUIRE(s.coverage == 0.0);
    }
    SECTION("epsilon above the peak excludes everything") {
        double peak = 0.0;
        for (double v : field.values) peak = std::max(peak, v);
        auto s = support_set(field, b, peak * 1.5);
        REQUIRE(s.coverage == 1.0);
    }
    SECTION("coverage is nonincreasing as epsilon decreases") {
        double prev = 1.0;
        for (double eps : {0.4, 0.2, 0.1, 0.05}) {
            auto s = support_set(field, b, eps);
            REQUIRE(s.coverage <= prev + 1e-15);
            prev = s.coverage;
        }
    }
    SECTION("negative epsilon is rejected") {
        REQUIRE_THROWS_AS(support_set(field, b, -0.1), DomainError);
    }
}

TEST_CASE("increment moments") {
    SECTION("zero gap gives a zero moment") {
        std::vector<LocalTimeField> fields(200);
        REQUIRE(increment_moment(fields, 0.3, 0.3, 2) == 0.0);
    }
    SECTION("too few replications is a power error") {
        std::vector<LocalTimeField> fields(50);
        REQUIRE_THROWS_AS(increment_moment(fields, 0.0, 0.5, 2), PowerError);
    }
    SECTION("odd moment order is rejected") {
        std::vector<LocalTimeField> fields(250);
        REQUIRE_THROWS_AS(increment_moment(fields, 0.0, 0.5, 3), DomainError);
    }
    SECTION("holder slope of the smoothed walk field (light version)") {
        const std::size_t R = 250, n = std::size_t(1) << 12;
        std::vector<double> gaps = {1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2};
        std::vector<double> pts = {0.0};
        for (double g : gaps) pts.push_back(g);
        std::vector<LocalTimeField> fields;
        fields.reserve(R);
        for (std::size_t r = 0; r < R; ++r)
            fields.push_back(local_time_field(random_walk(n, split_seed(505, r)),
                                              kernels::triangular(), 1.0, pts));
        const auto rep = increment_moments(fields, 0.0, gaps, 2);
        REQUIRE(rep.moments.size() == gaps.size());
        for (double m : rep.moments) REQUIRE(m > 0.0);
        REQUIRE(rep.slope >= 0.25);  // target exponent beta = 0.4 with generous slack
        REQUIRE(rep.slope <= 0.85);
    }
}

TEST_CASE("beta_bar reference points") {
    REQUIRE(beta_bar(0.5) == Catch::Approx(0.5));
    REQUIRE(beta_bar(1.0 / 3.0) == Catch::Approx(1.0));
    REQUIRE(beta_bar(0.8) == Catch::Approx(0.125));
}

TEST_CASE("bandwidth smoothing collapses to the recentering identity") {
    // L_n^f(a, 1/b) - (int f) L_n^phi(a, 1) equals e_n^{-1} S_n of the
    // recentered function, exactly
    auto b = random_walk(1024, 3);
    const auto f = kernels::gaussian();
    const double a = 0.4, binv = 2.0;
    auto Ff = local_time_field(b, f, 1.0 / binv, {a});
    auto Fphi = local_time_field(b, kernels::triangular(), 1.0, {a});
    const auto g = recentered(f, b.d_n * a, binv);
    const double lhs = Ff.values[0] - Fphi.values[0];
    const double rhs = sum_zero_energy(b, g) / b.e_n;
    REQUIRE(lhs == Catch::Approx(rhs).margin(1e-11));
}

TEST_CASE("bandwidth-smoothing error shrinks with n") {
    // median over replications of sup_a |L^f(a,h) - (int f) L^phi(a)|,
    // decreasing across the n-ladder; prefixes of a common trajectory keep
    // the comparison pathwise
    const auto f = kernels::gaussian();
    auto grid = make_grid(-2.0, 2.0, 1.0 / 32.0);
    const std::vector<std::size_t> ladder = {std::size_t(1) << 12, std::size_t(1) << 14,
                                             std::size_t(1) << 16};
    std::vector<std::vector<double>> sups(ladder.size());
    for (std::uint64_t r = 0; r < 24; ++r) {
        const auto full = random_walk(ladder.back(), split_seed(808, r));
        for (std::size_t i = 0; i < ladder.size(); ++i) {
            const std::size_t n = ladder[i];
            PathBundle b = full;
            b.n = n;
            b.x.resize(n);
            b.v.resize(n);
            const auto np = norming(full.spec, NormingSequence{}, n);
            b.d_n = np.d;
            b.e_n = np.e;
            const double h = 4.0 * std::pow(static_cast<double>(n), -0.1);
            auto Ff = local_time_field(b, f, h, grid);
            auto Fp = local_time_field(b, kernels::triangular(), 1.0, grid);
            double sup = 0.0;
            for (std::size_t j = 0; j < grid.size(); ++j)
                sup = std::max(sup, std::abs(Ff.values[j] - Fp.values[j]));
            sups[i].push_back(sup);
        }
    }
    REQUIRE(stats::median(sups[1]) < stats::median(sups[0]));
    REQUIRE(stats::median(sups[2]) < stats::median(sups[1]));
}
