#include <doctest.h>

#include <cmath>
#include <sstream>

#include "soca/experiments.hpp"
#include "soca/gaussian.hpp"
#include "soca/spectrum.hpp"
#include "test_support.hpp"

using namespace soca;

TEST_SUITE_BEGIN("experiments");

namespace {

MixedSourceSpec two_bernoulli(double t) {
    MixedSourceSpec m;
    m.components.push_back({t, {{0.6, 0.4}}});
    m.components.push_back({1.0 - t, {{0.9, 0.1}}});
    return m;
}

std::size_t column(const StudyTable& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (t.columns[i] == name) return i;
    }
    REQUIRE(false);
    return 0;
}

}  // namespace

TEST_CASE("csv output is headered, comma-separated, LF-terminated") {
    StudyTable t;
    t.columns = {"x", "y"};
    t.rows = {{1.0, 0.1}, {2.0, 1.0 / 3.0}};
    std::string csv = t.to_csv();
    CHECK(csv == "x,y\n1,0.10000000000000001\n2,0.33333333333333331\n");
}

TEST_CASE("berry_esseen_study rejects flat spectra") {
    CHECK_THROWS_AS(static_cast<void>(berry_esseen_study({{0.5, 0.5}}, {0.0}, {16})), Error);
}

TEST_CASE("berry_esseen_study rows") {
    SourceSpectrum p{{0.75, 0.25}};
    auto t = berry_esseen_study(p, {-1.0, 0.0, 1.0}, {64, 1024});
    REQUIRE(t.rows.size() == 6);
    auto n_col = column(t, "n");
    auto emp = column(t, "empirical");
    auto diff = column(t, "abs_diff");
    auto scaled = column(t, "abs_diff_times_sqrt_n");
    for (const auto& row : t.rows) {
        CHECK(row[scaled] ==
              doctest::Approx(row[diff] * std::sqrt(row[n_col])).epsilon(1e-12));
    }
    // the median row at n=1024 sits within 0.05 of 1/2
    const auto& median_row = t.rows[4];
    CHECK(median_row[n_col] == 1024.0);
    CHECK(std::abs(median_row[emp] - 0.5) <= 0.05);
}

TEST_CASE("dominance_study demands the entropy order") {
    CHECK_THROWS_AS(
        static_cast<void>(dominance_study({{0.5, 0.5}}, {{0.5, 0.5}}, 0.0, {16})), Error);
    CHECK_THROWS_AS(
        static_cast<void>(dominance_study({{0.9, 0.1}}, {{0.6, 0.4}}, 0.0, {16})), Error);
}

TEST_CASE("dominance_study columns stay in [0,1] and separate") {
    auto t = dominance_study({{0.6, 0.4}}, {{0.9, 0.1}}, 0.0, {256, 1024, 4096});
    auto low = column(t, "tail_low_entropy_source");
    auto high = column(t, "tail_high_entropy_source");
    for (const auto& row : t.rows) {
        CHECK(row[low] >= 0.0);
        CHECK(row[low] <= 1.0);
        CHECK(row[high] >= 0.0);
        CHECK(row[high] <= 1.0);
    }
    CHECK(t.rows.back()[low] <= 0.01);
    CHECK(t.rows.back()[high] >= 0.99);
}

TEST_CASE("convergence_study on a flat single source uses the degenerate branch") {
    auto m = as_mixture({{0.5, 0.5}});
    auto t = convergence_study(m, 0.25, {16, 64, 256});
    auto log2_m = column(t, "log2_M");
    auto b_star = column(t, "b_star");
    auto gap = column(t, "gap");
    for (const auto& row : t.rows) {
        CHECK(row[b_star] == 0.0);
        CHECK(row[gap] >= 0.0);
        double n = row[column(t, "n")];
        // closed form: M = ceil(0.75 * 2^n)
        double expected = std::log2(std::ceil(0.75 * std::exp2(n)));
        CHECK(row[log2_m] == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(t.rows.back()[gap] <= t.rows.front()[gap]);
}

TEST_CASE("convergence_study tracks the two-source prediction") {
    auto m = two_bernoulli(0.6);
    auto t = convergence_study(m, 0.2, {64, 256, 1024});
    auto gap = column(t, "gap");
    CHECK(t.rows.back()[gap] < t.rows.front()[gap]);
    auto b_hat = column(t, "b_hat");
    auto b_star = column(t, "b_star");
    for (const auto& row : t.rows) {
        CHECK(std::abs(row[b_hat] - row[b_star]) == doctest::Approx(row[gap]).epsilon(1e-12));
    }
}

TEST_CASE("first_order_divergence_check drifts with the documented sign") {
    auto m = two_bernoulli(0.6);
    double a = predicted_rate(m, 0.2).first_order_rate;

    auto low = first_order_divergence_check(m, 0.2, a - 0.1, {64, 256, 1024});
    auto norm = column(low, "normalized");
    CHECK(low.rows[0][norm] < low.rows[1][norm]);
    CHECK(low.rows[1][norm] < low.rows[2][norm]);

    auto high = first_order_divergence_check(m, 0.2, a + 0.1, {64, 256, 1024});
    CHECK(high.rows[0][norm] > high.rows[1][norm]);
    CHECK(high.rows[1][norm] > high.rows[2][norm]);

    // wrong_a = a reproduces the convergence b_hat column
    auto zero = first_order_divergence_check(m, 0.2, a, {64, 256});
    auto conv = convergence_study(m, 0.2, {64, 256});
    auto b_hat = column(conv, "b_hat");
    for (std::size_t i = 0; i < zero.rows.size(); ++i) {
        CHECK(zero.rows[i][norm] == doctest::Approx(conv.rows[i][b_hat]).epsilon(1e-12));
    }
}

TEST_CASE("figure1_curve hits zero at eps = 1/2 and stays inside its bounds") {
    std::vector<double> grid;
    for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
    auto t = figure1_curve(0.235, 0.712, 0.425, grid);
    auto eps = column(t, "eps");
    auto l = column(t, "L");
    auto lo = column(t, "lower_bound");
    auto hi = column(t, "upper_bound");
    double prev = 1e300;
    for (const auto& row : t.rows) {
        CHECK(row[l] >= row[lo] - 1e-9);
        CHECK(row[l] <= row[hi] + 1e-9);
        CHECK(row[l] < prev);
        prev = row[l];
        if (row[eps] == 0.5) CHECK(std::abs(row[l]) <= 1e-9);
    }
    // reference point from a high-precision root find
    CHECK(t.rows[24][eps] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(t.rows[24][l] == doctest::Approx(0.2787352311399006).epsilon(1e-8));
}

TEST_CASE("studies are deterministic") {
    auto m = two_bernoulli(0.6);
    auto a = convergence_study(m, 0.2, {64, 128}).to_csv();
    auto b = convergence_study(m, 0.2, {64, 128}).to_csv();
    CHECK(a == b);
    auto f1 = figure1_curve(0.235, 0.712, 0.425, {0.25, 0.5, 0.75}).to_csv();
    auto f2 = figure1_curve(0.235, 0.712, 0.425, {0.25, 0.5, 0.75}).to_csv();
    CHECK(f1 == f2);
}

TEST_CASE("predicted_rate dispatches on the mixture shape") {
    auto flat = predicted_rate(as_mixture({{0.25, 0.25, 0.25, 0.25}}), 0.3);
    CHECK(flat.rate.case_tag == RateCase::Degenerate);
    CHECK(flat.rate.b_star == 0.0);
    CHECK(flat.first_order_rate == doctest::Approx(2.0));

    auto single = predicted_rate(as_mixture({{0.75, 0.25}}), 0.3);
    SourceStats st = stats({{0.75, 0.25}});
    CHECK(single.rate.b_star ==
          doctest::Approx(-st.sigma * std_normal_quantile(0.3)).epsilon(1e-9));

    auto m = two_bernoulli(0.6);
    auto case2 = predicted_rate(m, 0.2);
    CHECK(case2.first_order_rate == doctest::Approx(entropy({{0.6, 0.4}})));
    SourceStats s1 = stats({{0.6, 0.4}});
    CHECK(case2.rate.b_star ==
          doctest::Approx(-s1.sigma * std_normal_quantile(0.2 / 0.6)).epsilon(1e-8));
}

TEST_SUITE_END();
