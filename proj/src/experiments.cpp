#include "soca/experiments.hpp"

#include <cmath>
#include <cstdio>

#include "soca/gaussian.hpp"
#include "soca/spectrum.hpp"

namespace soca {
namespace {

std::string format_cell(double v) {
    if (v == 0.0) v = 0.0;  // never print -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string StudyTable::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ',';
        out += columns[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

StudyTable berry_esseen_study(const SourceSpectrum& p, const std::vector<double>& l_grid,
                              const std::vector<int>& n_grid) {
    const MixedSourceSpec m = as_mixture(p);
    validate_or_throw(m);
    const SourceStats st = stats(p);
    if (st.sigma <= 0.0) {
        throw Error(ErrorCode::DegenerateSigma, "flat spectrum: sigma = 0");
    }

    StudyTable table;
    table.columns = {"n", "L", "empirical", "gaussian", "abs_diff", "abs_diff_times_sqrt_n"};
    for (int n : n_grid) {
        const Spectrum spec = Spectrum::from_types(m, n);
        const double sqrt_n = std::sqrt(static_cast<double>(n));
        for (double l : l_grid) {
            double empirical = spec.tail_mass(-n * st.entropy + sqrt_n * l);
            double gaussian = std_normal_cdf(l / st.sigma);
            double diff = std::abs(empirical - gaussian);
            table.rows.push_back({static_cast<double>(n), l, empirical, gaussian, diff,
                                  diff * sqrt_n});
        }
    }
    return table;
}

StudyTable dominance_study(const SourceSpectrum& p1, const SourceSpectrum& p2, double c,
                           const std::vector<int>& n_grid) {
    const MixedSourceSpec m1 = as_mixture(p1);
    const MixedSourceSpec m2 = as_mixture(p2);
    validate_or_throw(m1);
    validate_or_throw(m2);
    const double s1 = entropy(p1);
    const double s2 = entropy(p2);
    if (!(s1 > s2)) {
        throw Error(ErrorCode::EntropyOrder, "dominance_study requires S(p1) > S(p2)");
    }

    StudyTable table;
    table.columns = {"n", "tail_low_entropy_source", "tail_high_entropy_source"};
    for (int n : n_grid) {
        const double sqrt_n = std::sqrt(static_cast<double>(n));
        double low = Spectrum::from_types(m2, n).tail_mass(-n * s1 - sqrt_n * c);
        double high = Spectrum::from_types(m1, n).tail_mass(-n * s2 - sqrt_n * c);
        table.rows.push_back({static_cast<double>(n), low, high});
    }
    return table;
}

StudyTable convergence_study(const MixedSourceSpec& m, double eps, const std::vector<int>& n_grid,
                             double eta) {
    const TwoSourceRate predicted = predicted_rate(m, eps, eta);
    const double a = predicted.first_order_rate;
    const double b_star = predicted.rate.b_star;

    StudyTable table;
    table.columns = {"n", "log2_M", "b_hat", "b_star", "gap"};
    for (int n : n_grid) {
        auto compression = min_compression_length(m, n, eps);
        double sqrt_n = std::sqrt(static_cast<double>(n));
        double b_hat = (compression.log2_dim - n * a) / sqrt_n;
        table.rows.push_back({static_cast<double>(n), compression.log2_dim, b_hat, b_star,
                              std::abs(b_hat - b_star)});
    }
    return table;
}

StudyTable first_order_divergence_check(const MixedSourceSpec& m, double eps, double wrong_a,
                                        const std::vector<int>& n_grid, double eta) {
    validate_or_throw(m);
    (void)eta;
    StudyTable table;
    table.columns = {"n", "normalized"};
    for (int n : n_grid) {
        auto compression = min_compression_length(m, n, eps);
        double normalized = (compression.log2_dim - n * wrong_a) /
                            std::sqrt(static_cast<double>(n));
        table.rows.push_back({static_cast<double>(n), normalized});
    }
    return table;
}

StudyTable figure1_curve(double sigma1, double sigma2, double t,
                         const std::vector<double>& eps_grid) {
    if (!(sigma1 > 0.0 && sigma2 > 0.0)) {
        throw Error(ErrorCode::DomainError, "figure1_curve requires positive sigmas");
    }
    if (!(t > 0.0 && t < 1.0)) {
        throw Error(ErrorCode::DomainError, "mixing parameter t must lie in (0,1)");
    }

    StudyTable table;
    table.columns = {"eps", "L", "lower_bound", "upper_bound"};
    const RateComponent comps[] = {{t, 0.0, sigma1}, {1.0 - t, 0.0, sigma2}};
    for (double eps : eps_grid) {
        RateResult r = solve_rate_equation(comps, 0.0, eps);
        Interval bounds = l_range(sigma1, sigma2, eps);
        table.rows.push_back({eps, r.b_star, bounds.lo, bounds.hi});
    }
    return table;
}

TwoSourceRate predicted_rate(const MixedSourceSpec& m, double eps, double eta) {
    validate_or_throw(m);
    const double a = first_order_rate(m, eps, eta);

    std::vector<RateComponent> comps;
    comps.reserve(m.size());
    bool eq_all_flat = true;
    for (const auto& c : m.components) {
        SourceStats st = stats(c.spectrum);
        comps.push_back({c.weight, st.entropy, st.sigma});
        if (std::abs(st.entropy - a) <= eta && st.sigma > 0.0) eq_all_flat = false;
    }
    if (eq_all_flat) {
        // Every component at the rate level has a single-level spectrum; the
        // normalized length sequence converges to 0 without a Gaussian term.
        return {a, {0.0, RateCase::Degenerate}};
    }
    return {a, solve_rate_equation(comps, a, eps, eta)};
}

}  // namespace soca
