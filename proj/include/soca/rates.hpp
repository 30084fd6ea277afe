#pragma once

#include <span>
#include <vector>

#include "soca/model.hpp"

namespace soca {

/// First-order rate candidate and error threshold.
struct RateQuery {
    double a = 0.0;    // bits
    double eps = 0.5;  // in (0,1)
};

enum class RateCase { GeneralSolve, Case1, Case2, Case3, Degenerate };

const char* to_string(RateCase c);

/// Second-order rate coefficient. b_star is +/-infinity when the defining
/// equation cannot be crossed (the query rate is off the first-order rate on
/// one side or the other).
struct RateResult {
    double b_star = 0.0;
    RateCase case_tag = RateCase::GeneralSolve;

    bool is_finite() const;
};

/// (weight, entropy, sigma) of one mixture component; the rate equation
/// depends on the source only through these.
struct RateComponent {
    double weight = 0.0;
    double entropy = 0.0;
    double sigma = 0.0;
};

/// Solves sum_{S_i = a} t_i Phi(b / sigma_i) + sum_{S_i < a} t_i = 1 - eps
/// for b by bracketing + bisection (the left side is strictly increasing
/// whenever the equal-entropy mass is positive). Entropy comparisons use eta.
/// Throws Error(DegenerateSigma) if an equal-entropy component has sigma = 0.
RateResult solve_rate_equation(std::span<const RateComponent> components, double a,
                               double eps, double eta = kDefaultEntropyEta);

/// Same equation with the components' stats computed from their spectra.
RateResult solve_second_order(const MixedSourceSpec& m, const RateQuery& q,
                              double eta = kDefaultEntropyEta);

struct TwoSourceRate {
    double first_order_rate = 0.0;  // the entropy the expansion is taken around
    RateResult rate;
};

/// Two-component mixture: picks the case from the entropy order and the
/// weight/eps comparison, then evaluates the closed form (distinct entropies)
/// or the Case-1 equation solver (equal entropies). Inputs may come in either
/// entropy order. Throws Error(BoundaryTEqualsEps) when S1 != S2 and t = eps
/// within eta, where no expansion applies.
TwoSourceRate two_source_rate(const SourceStats& s1, const SourceStats& s2, double t,
                              double eps, double eta = kDefaultEntropyEta);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x, double slack = 0.0) const {
        return x >= lo - slack && x <= hi + slack;
    }
};

/// Range that the equal-entropy two-source solution is confined to:
/// the interval with endpoints -sigma_min * PhiInv(eps) and
/// -sigma_max * PhiInv(eps), collapsing to {0} at eps = 1/2.
Interval l_range(double sigma1, double sigma2, double eps);

/// The entropy level a at which the mixture's expansion has a finite second
/// order coefficient: strictly-above mass < eps and strictly-below mass
/// < 1 - eps. Levels are entropy clusters with gap <= eta. Throws
/// Error(BoundaryTEqualsEps) when a cluster-mass boundary lands on eps.
double first_order_rate(const MixedSourceSpec& m, double eps,
                        double eta = kDefaultEntropyEta);

}  // namespace soca
