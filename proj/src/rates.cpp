#include "soca/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "soca/gaussian.hpp"

namespace soca {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBisectionTol = 1e-12;     // width of the final bracket in b
constexpr double kMassBoundaryTol = 1e-12;  // probability-mass comparisons

void require_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw Error(ErrorCode::DomainError, "eps must lie in (0,1)");
    }
}

}  // namespace

const char* to_string(RateCase c) {
    switch (c) {
        case RateCase::GeneralSolve: return "GeneralSolve";
        case RateCase::Case1: return "Case1";
        case RateCase::Case2: return "Case2";
        case RateCase::Case3: return "Case3";
        case RateCase::Degenerate: return "Degenerate";
    }
    return "Unknown";
}

bool RateResult::is_finite() const { return std::isfinite(b_star); }

RateResult solve_rate_equation(std::span<const RateComponent> components, double a,
                               double eps, double eta) {
    require_eps(eps);
    if (!(eta > 0.0)) throw Error(ErrorCode::DomainError, "eta must be > 0");

    double eq_mass = 0.0;
    double lt_mass = 0.0;
    double sigma_max = 0.0;
    std::vector<const RateComponent*> eq;
    for (const auto& comp : components) {
        if (std::abs(comp.entropy - a) <= eta) {
            if (comp.sigma <= 0.0) {
                throw Error(ErrorCode::DegenerateSigma,
                            "component at the queried entropy has sigma = 0");
            }
            eq.push_back(&comp);
            eq_mass += comp.weight;
            sigma_max = std::max(sigma_max, comp.sigma);
        } else if (comp.entropy < a) {
            lt_mass += comp.weight;
        }
    }

    const double target = 1.0 - eps;
    // F(b) ranges over the open interval (lt_mass, lt_mass + eq_mass); a
    // target outside it means the queried rate misses the first-order rate on
    // one side, which the result reports as an infinity of matching sign.
    if (eq.empty() || target <= lt_mass) {
        return {target <= lt_mass ? -kInf : kInf, RateCase::GeneralSolve};
    }
    if (target >= lt_mass + eq_mass) {
        return {kInf, RateCase::GeneralSolve};
    }

    auto equation = [&](double b) {
        double sum = lt_mass;
        for (const auto* comp : eq) sum += comp->weight * std_normal_cdf(b / comp->sigma);
        return sum;
    };

    double lo = -10.0 * sigma_max;
    double hi = 10.0 * sigma_max;
    while (equation(lo) >= target) lo *= 2.0;
    while (equation(hi) <= target) hi *= 2.0;
    while (hi - lo > kBisectionTol) {
        double mid = 0.5 * (lo + hi);
        if (equation(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {0.5 * (lo + hi), RateCase::GeneralSolve};
}

RateResult solve_second_order(const MixedSourceSpec& m, const RateQuery& q, double eta) {
    validate_or_throw(m);
    std::vector<RateComponent> comps;
    comps.reserve(m.size());
    for (const auto& c : m.components) {
        SourceStats st = stats(c.spectrum);
        comps.push_back({c.weight, st.entropy, st.sigma});
    }
    return solve_rate_equation(comps, q.a, q.eps, eta);
}

TwoSourceRate two_source_rate(const SourceStats& s1, const SourceStats& s2, double t,
                              double eps, double eta) {
    require_eps(eps);
    if (!(t > 0.0 && t < 1.0)) {
        throw Error(ErrorCode::DomainError, "mixing parameter t must lie in (0,1)");
    }
    if (!(eta > 0.0)) throw Error(ErrorCode::DomainError, "eta must be > 0");

    SourceStats hi = s1;
    SourceStats lo = s2;
    double t_hi = t;
    if (hi.entropy < lo.entropy) {
        std::swap(hi, lo);
        t_hi = 1.0 - t;
    }

    if (std::abs(hi.entropy - lo.entropy) <= eta) {
        const RateComponent comps[] = {{t_hi, hi.entropy, hi.sigma},
                                       {1.0 - t_hi, hi.entropy, lo.sigma}};
        RateResult r = solve_rate_equation(comps, hi.entropy, eps, eta);
        r.case_tag = RateCase::Case1;
        return {hi.entropy, r};
    }

    if (std::abs(t_hi - eps) <= eta) {
        throw Error(ErrorCode::BoundaryTEqualsEps,
                    "t = eps boundary: no expansion applies with distinct entropies");
    }
    if (t_hi > eps) {
        double b = -hi.sigma * std_normal_quantile(eps / t_hi);
        return {hi.entropy, {b, RateCase::Case2}};
    }
    double b = -lo.sigma * std_normal_quantile((eps - t_hi) / (1.0 - t_hi));
    return {lo.entropy, {b, RateCase::Case3}};
}

Interval l_range(double sigma1, double sigma2, double eps) {
    require_eps(eps);
    if (!(sigma1 > 0.0 && sigma2 > 0.0)) {
        throw Error(ErrorCode::DomainError, "l_range requires positive sigmas");
    }
    double smin = std::min(sigma1, sigma2);
    double smax = std::max(sigma1, sigma2);
    if (eps == 0.5) return {0.0, 0.0};
    double q = std_normal_quantile(eps);
    if (eps < 0.5) return {-smin * q, -smax * q};  // q < 0: positive interval
    return {-smax * q, -smin * q};
}

double first_order_rate(const MixedSourceSpec& m, double eps, double eta) {
    validate_or_throw(m);
    require_eps(eps);

    struct Level {
        double entropy;
        double weight;
    };
    std::vector<Level> levels;
    for (const auto& c : m.components) {
        levels.push_back({entropy(c.spectrum), c.weight});
    }
    std::sort(levels.begin(), levels.end(),
              [](const Level& a, const Level& b) { return a.entropy > b.entropy; });

    // Walk entropy clusters from the top; the expansion lives at the cluster
    // where the cumulative weight from above crosses eps.
    double above = 0.0;
    std::size_t i = 0;
    while (i < levels.size()) {
        double anchor = levels[i].entropy;
        double cluster_mass = 0.0;
        while (i < levels.size() && anchor - levels[i].entropy <= eta) {
            cluster_mass += levels[i].weight;
            ++i;
        }
        if (std::abs(above - eps) <= kMassBoundaryTol ||
            std::abs(above + cluster_mass - eps) <= kMassBoundaryTol) {
            throw Error(ErrorCode::BoundaryTEqualsEps,
                        "component mass boundary coincides with eps");
        }
        if (above < eps && above + cluster_mass > eps) return anchor;
        above += cluster_mass;
    }
    throw Error(ErrorCode::DomainError, "no entropy level matches eps");  // unreachable
}

}  // namespace soca
