#pragma once

#include <string>
#include <vector>

#include "soca/model.hpp"
#include "soca/rates.hpp"

namespace soca {

/// Rectangular numeric study output: named columns, rows of doubles.
/// Cells are finite except where a rate solver legitimately reports +/-inf.
struct StudyTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// Comma-separated, header row, 17-significant-digit floats, LF endings.
    std::string to_csv() const;
};

/// Gap between the exact spectral tail at -nS + sqrt(n)L and Phi(L/sigma).
/// Columns: n, L, empirical, gaussian, abs_diff, abs_diff_times_sqrt_n.
/// Throws Error(DegenerateSigma) when sigma(p) = 0.
StudyTable berry_esseen_study(const SourceSpectrum& p, const std::vector<double>& l_grid,
                              const std::vector<int>& n_grid);

/// Tail crossover between two sources of distinct entropy (S(p1) > S(p2)
/// required, else Error(EntropyOrder)).
/// Columns: n, tail_low_entropy_source, tail_high_entropy_source.
StudyTable dominance_study(const SourceSpectrum& p1, const SourceSpectrum& p2, double c,
                           const std::vector<int>& n_grid);

/// Finite-blocklength compression length against the predicted expansion.
/// Columns: n, log2_M, b_hat, b_star, gap.
StudyTable convergence_study(const MixedSourceSpec& m, double eps, const std::vector<int>& n_grid,
                             double eta = kDefaultEntropyEta);

/// Normalized length sequence around a deliberately wrong first-order rate.
/// Columns: n, normalized.
StudyTable first_order_divergence_check(const MixedSourceSpec& m, double eps, double wrong_a,
                                        const std::vector<int>& n_grid,
                                        double eta = kDefaultEntropyEta);

/// Equal-entropy two-source solution across an eps grid with its confinement
/// bounds. Columns: eps, L, lower_bound, upper_bound.
StudyTable figure1_curve(double sigma1, double sigma2, double t,
                         const std::vector<double>& eps_grid);

/// The expansion the studies compare against: first-order rate chosen from
/// the mixture and eps, second-order coefficient from the rate equation.
/// A mixture whose equal-entropy components all have sigma = 0 degenerates to
/// a flat spectrum level; the coefficient is 0 there (tag Degenerate).
TwoSourceRate predicted_rate(const MixedSourceSpec& m, double eps,
                             double eta = kDefaultEntropyEta);

}  // namespace soca
