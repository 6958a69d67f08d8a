#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lfsm/brackets.hpp"
#include "lfsm/function_space.hpp"
#include "lfsm/quadrature.hpp"

using namespace lfsm;

namespace {

double bracket_gap_quadrature(const Bracket& b) {
    const auto w = detail::union_window(b.lower.window, b.upper.window);
    return quad::adaptive([&b](double x) { return b.upper.eval(x) - b.lower.eval(x); },
                          w.lo - 0.5, w.hi + 0.5, 1e-9);
}

bool bracket_contains(const Bracket& b, const RealFunction& f, std::size_t pts = 1000) {
    const auto w = detail::union_window(b.upper.window, f.window);
    for (std::size_t i = 0; i <= pts; ++i) {
        const double x = w.lo + w.width() * static_cast<double>(i) / static_cast<double>(pts);
        const double v = f.eval(x);
        if (v < b.lower.eval(x) - 1e-12 || v > b.upper.eval(x) + 1e-12) return false;
    }
    return true;
}

/// Location family of triangular kernels over theta in [0, 1].
FunctionClass location_family() {
    auto family = [](double theta) { return scale_shift(kernels::triangular(), theta, 1.0); };
    // continuous pointwise modulus: slope 1 in theta, supported on [-1, 2]
    auto modulus = kernels::plateau(-1.0, 2.0, 0.25);
    auto envelope = kernels::plateau(-1.0, 2.0, 0.25);
    return FunctionClass::parametric(family, 0.0, 1.0, 1.0, modulus, envelope);
}

}  // namespace

TEST_CASE("singleton class with a continuous member") {
    auto cls = FunctionClass::finite({kernels::triangular()}, kernels::plateau(-1, 1, 0.5));
    const auto cover = bracket_cover(cls, 0.25);
    REQUIRE(cover.count() == 1);
    REQUIRE(cover.brackets[0].l1_gap < 0.25);
    REQUIRE(bracket_gap_quadrature(cover.brackets[0]) < 0.25);
    REQUIRE(bracket_contains(cover.brackets[0], kernels::triangular()));
    REQUIRE(find_bracket(cover, kernels::triangular()).has_value());
    // brackets are Lipschitz with finite beta-moment
    REQUIRE(cover.brackets[0].upper.lipschitz.has_value());
    REQUIRE(std::isfinite(beta_moment(cover.brackets[0].upper, 0.5)));
}

TEST_CASE("singleton class with a discontinuous member uses hull smoothing") {
    const auto ind = kernels::indicator(-0.5, 0.5);
    auto cls = FunctionClass::finite({ind}, kernels::plateau(-0.5, 0.5, 0.25));
    for (double eps : {0.5, 0.2, 0.05}) {
        const auto cover = bracket_cover(cls, eps);
        REQUIRE(cover.count() == 1);
        const auto& b = cover.brackets[0];
        REQUIRE(b.lower.lipschitz.has_value());  // continuous despite the jump in f
        REQUIRE(b.upper.lipschitz.has_value());
        REQUIRE(b.l1_gap < eps);
        REQUIRE(bracket_contains(b, ind, 4000));
    }
}

TEST_CASE("coarse epsilon collapses to the single envelope bracket") {
    auto F = kernels::plateau(-1, 1, 0.5);
    auto cls = FunctionClass::finite({kernels::triangular()}, F);
    const auto cover = bracket_cover(cls, 2.0 * F.l1_norm + 1.0);
    REQUIRE(cover.count() == 1);
    REQUIRE(cover.brackets[0].upper.eval(0.0) == Catch::Approx(1.0));
    REQUIRE(cover.brackets[0].lower.eval(0.0) == Catch::Approx(-1.0));
    REQUIRE(bracket_contains(cover.brackets[0], kernels::triangular()));
}

TEST_CASE("location family cover: size bound and membership") {
    auto cls = location_family();
    std::size_t prev = 0;
    for (double eps : {0.5, 0.25, 0.125}) {
        const auto cover = bracket_cover(cls, eps);
        INFO("eps=" << eps << " count=" << cover.count());
        REQUIRE(cover.count() <= static_cast<std::size_t>(std::ceil(4.0 / eps)));
        REQUIRE(cover.count() >= prev);  // nondecreasing as eps shrinks
        prev = cover.count();
        for (const auto& b : cover.brackets) REQUIRE(b.l1_gap < eps);
        // membership for 100 sampled parameter values
        for (const auto& m : cls.sample_members(100)) {
            REQUIRE(find_bracket(cover, m, 400).has_value());
        }
    }
}

TEST_CASE("envelope dominates sampled members pointwise") {
    auto cls = location_family();
    const auto F = cls.envelope();
    for (const auto& m : cls.sample_members(25)) {
        for (int i = 0; i <= 600; ++i) {
            const double x = -2.0 + 5.0 * i / 600.0;
            REQUIRE(std::abs(m.eval(x)) <= F.eval(x) + 1e-12);
        }
    }
}

TEST_CASE("smoothness ball cover") {
    const auto F = kernels::plateau(-0.25, 0.25, 0.25);
    auto cls = FunctionClass::smoothness_ball(1.0, 1.0, F);

    SECTION("moderate eps yields a valid finite net") {
        const auto cover = bracket_cover(cls, 1.2);
        REQUIRE(cover.count() >= 2);
        for (const auto& b : cover.brackets) REQUIRE(b.l1_gap < 1.2);
        // crafted Holder-1 members under the envelope
        std::vector<RealFunction> members;
        for (double c : {-0.9, -0.3, 0.2, 0.8}) {
            RealFunction g;
            const double amp = 0.08 * c;
            g.eval = [amp](double x) {
                const double inner = std::clamp(1.0 - 10.0 * std::abs(x), 0.0, 1.0);
                return amp * inner;  // slope 10*|amp| <= 0.9, support inside [-0.1, 0.1]
            };
            g.window = F.window;
            g.support = F.support;
            g.name = "holder_member";
            members.push_back(std::move(g));
        }
        for (const auto& m : members) REQUIRE(find_bracket(cover, m, 800).has_value());
    }
    SECTION("tiny eps is refused") {
        REQUIRE_THROWS_AS(bracket_cover(cls, 0.01), RefinementError);
    }
    SECTION("sampled members stay below the envelope") {
        for (const auto& m : cls.sample_members(6))
            for (int i = 0; i <= 500; ++i) {
                const double x = -0.6 + 1.2 * i / 500.0;
                REQUIRE(std::abs(m.eval(x)) <= F.eval(x) + 1e-12);
            }
    }
}

TEST_CASE("bracket_cover rejects nonpositive epsilon") {
    auto cls = FunctionClass::finite({kernels::triangular()}, kernels::plateau(-1, 1, 0.5));
    REQUIRE_THROWS_AS(bracket_cover(cls, 0.0), DomainError);
}
