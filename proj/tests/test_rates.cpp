#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "soca/gaussian.hpp"
#include "soca/rates.hpp"
#include "test_support.hpp"

using namespace soca;

TEST_SUITE_BEGIN("rates");

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double equation_residual(std::span<const RateComponent> comps, double a, double eps, double b) {
    double sum = 0.0;
    for (const auto& c : comps) {
        if (std::abs(c.entropy - a) <= kDefaultEntropyEta) {
            sum += c.weight * std_normal_cdf(b / c.sigma);
        } else if (c.entropy < a) {
            sum += c.weight;
        }
    }
    return sum - (1.0 - eps);
}

}  // namespace

TEST_CASE("single source at eps = 1/2 solves to zero") {
    const RateComponent comps[] = {{1.0, 1.0, 1.0}};
    auto r = solve_rate_equation(comps, 1.0, 0.5);
    CHECK(std::abs(r.b_star) <= 1e-10);
    CHECK(r.case_tag == RateCase::GeneralSolve);
}

TEST_CASE("equal sigmas collapse to the single-source closed form") {
    for (double eps : {0.1, 0.3, 0.7, 0.9}) {
        for (double sigma : {0.2, 1.0, 2.5}) {
            const RateComponent comps[] = {{0.3, 1.0, sigma}, {0.7, 1.0, sigma}};
            auto r = solve_rate_equation(comps, 1.0, eps);
            CHECK(r.b_star ==
                  doctest::Approx(-sigma * std_normal_quantile(eps)).epsilon(1e-9));
        }
    }
}

TEST_CASE("documented two-sigma instance solves to zero at eps = 1/2") {
    const RateComponent comps[] = {{0.425, 1.0, 0.235}, {0.575, 1.0, 0.712}};
    auto r = solve_rate_equation(comps, 1.0, 0.5);
    CHECK(std::abs(r.b_star) <= 1e-10);
}

TEST_CASE("solver residual stays within 1e-10") {
    testing::SpecGen gen(13);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<RateComponent> comps;
        int k = 1 + trial % 3;
        double wsum = 0.0;
        for (int j = 0; j < k; ++j) {
            comps.push_back({gen.uniform(0.1, 1.0), 1.0, gen.uniform(0.05, 3.0)});
            wsum += comps.back().weight;
        }
        for (auto& c : comps) c.weight /= wsum;
        double eps = gen.uniform(0.02, 0.98);
        auto r = solve_rate_equation(comps, 1.0, eps);
        REQUIRE(r.is_finite());
        CHECK(std::abs(equation_residual(comps, 1.0, eps, r.b_star)) <= 1e-10);
    }
}

TEST_CASE("scaling every sigma scales the solution") {
    testing::SpecGen gen(17);
    for (int trial = 0; trial < 25; ++trial) {
        double s1 = gen.uniform(0.05, 2.0);
        double s2 = gen.uniform(0.05, 2.0);
        double t = gen.uniform(0.1, 0.9);
        double eps = gen.uniform(0.05, 0.95);
        double c = gen.uniform(0.5, 4.0);
        const RateComponent base[] = {{t, 1.0, s1}, {1.0 - t, 1.0, s2}};
        const RateComponent scaled[] = {{t, 1.0, c * s1}, {1.0 - t, 1.0, c * s2}};
        auto rb = solve_rate_equation(base, 1.0, eps);
        auto rs = solve_rate_equation(scaled, 1.0, eps);
        CHECK(rs.b_star == doctest::Approx(c * rb.b_star).epsilon(1e-9));
    }
}

TEST_CASE("solution decreases strictly in eps") {
    const RateComponent comps[] = {{0.425, 1.0, 0.235}, {0.575, 1.0, 0.712}};
    double prev = kInf;
    for (double eps = 0.05; eps < 0.99; eps += 0.05) {
        auto r = solve_rate_equation(comps, 1.0, eps);
        CHECK(r.b_star < prev);
        prev = r.b_star;
    }
}

TEST_CASE("querying off the first-order rate yields signed infinities") {
    // all mass strictly below the queried rate: any coefficient works
    const RateComponent below[] = {{1.0, 0.4, 0.5}};
    CHECK(solve_rate_equation(below, 1.0, 0.25).b_star == -kInf);
    // all mass strictly above: no coefficient reaches the target
    const RateComponent above[] = {{1.0, 1.5, 0.5}};
    CHECK(solve_rate_equation(above, 1.0, 0.25).b_star == kInf);
    // equal-entropy mass too small to bridge the gap
    const RateComponent split[] = {{0.1, 1.0, 0.5}, {0.9, 1.5, 0.5}};
    CHECK(solve_rate_equation(split, 1.0, 0.25).b_star == kInf);
}

TEST_CASE("flat equal-entropy components are rejected") {
    const RateComponent comps[] = {{0.5, 1.0, 0.0}, {0.5, 1.0, 0.7}};
    CHECK_THROWS_AS(static_cast<void>(solve_rate_equation(comps, 1.0, 0.5)), Error);
}

TEST_CASE("solve_second_order derives the components from spectra") {
    MixedSourceSpec m;
    m.components.push_back({0.6, {{0.25, 0.75}}});
    m.components.push_back({0.4, {{0.75, 0.25}}});  // same entropy and sigma
    SourceStats st = stats(m.components[0].spectrum);
    auto r = solve_second_order(m, {st.entropy, 0.3});
    CHECK(r.is_finite());
    // both components share sigma, so the closed form applies
    CHECK(r.b_star == doctest::Approx(-st.sigma * std_normal_quantile(0.3)).epsilon(1e-9));

    MixedSourceSpec flat;
    flat.components.push_back({1.0, {{0.5, 0.5}}});
    CHECK_THROWS_AS(static_cast<void>(solve_second_order(flat, {1.0, 0.5})), Error);
}

TEST_CASE("two_source_rate picks Case2 and its closed form") {
    SourceStats s1{1.0, 1.0, 1.0};
    SourceStats s2{0.5, 0.09, 0.3};
    auto r = two_source_rate(s1, s2, 0.5, 0.25);
    CHECK(r.first_order_rate == doctest::Approx(1.0));
    CHECK(r.rate.case_tag == RateCase::Case2);
    CHECK(std::abs(r.rate.b_star) <= 1e-12);  // eps/t = 1/2
}

TEST_CASE("two_source_rate picks Case3 and its closed form") {
    SourceStats s1{1.0, 1.0, 1.0};
    SourceStats s2{0.5, 1.0, 1.0};
    auto r = two_source_rate(s1, s2, 0.25, 0.625);
    CHECK(r.first_order_rate == doctest::Approx(0.5));
    CHECK(r.rate.case_tag == RateCase::Case3);
    CHECK(std::abs(r.rate.b_star) <= 1e-12);  // (eps-t)/(1-t) = 1/2
}

TEST_CASE("two_source_rate Case1 matches the equation solver") {
    SourceStats s1{1.0, 0.235 * 0.235, 0.235};
    SourceStats s2{1.0, 0.712 * 0.712, 0.712};
    auto r = two_source_rate(s1, s2, 0.425, 0.5);
    CHECK(r.rate.case_tag == RateCase::Case1);
    CHECK(std::abs(r.rate.b_star) <= 1e-10);

    testing::SpecGen gen(19);
    for (int trial = 0; trial < 40; ++trial) {
        double sig1 = gen.uniform(0.05, 3.0);
        double sig2 = gen.uniform(0.05, 3.0);
        double t = gen.uniform(0.1, 0.9);
        double eps = gen.uniform(0.05, 0.95);
        SourceStats a{1.2, sig1 * sig1, sig1};
        SourceStats b{1.2, sig2 * sig2, sig2};
        auto two = two_source_rate(a, b, t, eps);
        const RateComponent comps[] = {{t, 1.2, sig1}, {1.0 - t, 1.2, sig2}};
        auto general = solve_rate_equation(comps, 1.2, eps);
        CHECK(two.rate.b_star == doctest::Approx(general.b_star).epsilon(1e-9));
    }
}

TEST_CASE("two_source_rate input order does not matter") {
    SourceStats hi{1.4, 0.25, 0.5};
    SourceStats lo{0.6, 0.81, 0.9};
    auto a = two_source_rate(hi, lo, 0.7, 0.2);
    auto b = two_source_rate(lo, hi, 0.3, 0.2);
    CHECK(a.first_order_rate == b.first_order_rate);
    CHECK(a.rate.b_star == doctest::Approx(b.rate.b_star).epsilon(1e-12));
    CHECK(a.rate.case_tag == b.rate.case_tag);
}

TEST_CASE("two_source_rate rejects the t = eps boundary") {
    SourceStats s1{1.0, 1.0, 1.0};
    SourceStats s2{0.5, 1.0, 1.0};
    CHECK_THROWS_AS(static_cast<void>(two_source_rate(s1, s2, 0.3, 0.3)), Error);
    // equal entropies are fine at t = eps
    SourceStats s3{1.0, 0.25, 0.5};
    CHECK_NOTHROW(static_cast<void>(two_source_rate(s1, s3, 0.3, 0.3)));
}

TEST_CASE("closed forms agree with the equation solver across cases") {
    testing::SpecGen gen(23);
    int done2 = 0, done3 = 0;
    while (done2 < 40 || done3 < 40) {
        double sig1 = gen.uniform(0.05, 3.0);
        double sig2 = gen.uniform(0.05, 3.0);
        double t = gen.uniform(0.08, 0.92);
        double eps = gen.uniform(0.08, 0.92);
        if (std::abs(t - eps) < 0.05) continue;
        SourceStats s1{1.5, sig1 * sig1, sig1};
        SourceStats s2{0.5, sig2 * sig2, sig2};
        auto two = two_source_rate(s1, s2, t, eps);
        const RateComponent comps[] = {{t, 1.5, sig1}, {1.0 - t, 0.5, sig2}};
        auto general = solve_rate_equation(comps, two.first_order_rate, eps);
        CHECK(std::abs(two.rate.b_star - general.b_star) <= 1e-8);
        if (two.rate.case_tag == RateCase::Case2) ++done2;
        if (two.rate.case_tag == RateCase::Case3) ++done3;
    }
}

TEST_CASE("l_range on documented cases") {
    auto mid = l_range(0.235, 0.712, 0.5);
    CHECK(mid.lo == 0.0);
    CHECK(mid.hi == 0.0);

    auto upper = l_range(1.0, 2.0, 0.975);
    CHECK(upper.lo == doctest::Approx(-3.9199279690801085).epsilon(1e-5));
    CHECK(upper.hi == doctest::Approx(-1.9599639845400542).epsilon(1e-5));

    auto swapped = l_range(2.0, 1.0, 0.975);
    CHECK(swapped.lo == upper.lo);
    CHECK(swapped.hi == upper.hi);
}

TEST_CASE("the Case-1 solution lies inside l_range for every eps") {
    const double sig1 = 0.235, sig2 = 0.712, t = 0.425;
    const RateComponent comps[] = {{t, 1.0, sig1}, {1.0 - t, 1.0, sig2}};
    for (double eps = 0.02; eps < 0.99; eps += 0.02) {
        auto r = solve_rate_equation(comps, 1.0, eps);
        auto bounds = l_range(sig1, sig2, eps);
        CHECK(bounds.contains(r.b_star, 1e-9));
    }
}

TEST_CASE("first_order_rate follows the top-mass crossing") {
    MixedSourceSpec m;
    m.components.push_back({0.6, {{0.6, 0.4}}});
    m.components.push_back({0.4, {{0.9, 0.1}}});
    double s1 = entropy({{0.6, 0.4}});
    double s2 = entropy({{0.9, 0.1}});
    CHECK(first_order_rate(m, 0.2) == doctest::Approx(s1));   // t > eps
    CHECK(first_order_rate(m, 0.8) == doctest::Approx(s2));   // t < eps
    CHECK_THROWS_AS(static_cast<void>(first_order_rate(m, 0.6)), Error);  // boundary
}

TEST_SUITE_END();
