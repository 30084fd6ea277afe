#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "soca/bigint.hpp"
#include "soca/model.hpp"
#include "soca/spectrum.hpp"

namespace soca {

/// Size of the universal code's basis-aligned subspace (exact) and the
/// upper bound on the full basis-independent code space.
struct UniversalDims {
    double log2_xi = 0.0;       // -infinity when no type qualifies
    BigInt xi_exact;            // sum of |T_P| over types with |T_P| <= 2^(an+b*sqrt(n))
    double log2_upsilon_bound = 0.0;  // (d^2+d)*log2(n+1) + a*n + b*sqrt(n)
    int boundary_guard_hits = 0;      // types decided inside the 1e-9 log2 guard band
};

/// Dimension accounting for the type-class code at threshold exponent
/// a*n + b*sqrt(n). Type sizes are compared exactly (below 2^63 against the
/// floored threshold, above it through exact log2 with a guard band).
UniversalDims universal_dims(int n, int d, double a, double b,
                             std::uint64_t cap = type_cap_from_env());

/// One type enumeration evaluated against several (a, b) thresholds at once;
/// results are ordered like the input.
std::vector<UniversalDims> universal_dims_multi(int n, int d,
                                                const std::vector<std::pair<double, double>>& ab,
                                                std::uint64_t cap = type_cap_from_env());

struct InclusionCheck {
    bool holds = true;
    std::optional<std::vector<int>> counterexample;  // first violating sequence
};

/// Brute-force verification that every sequence with -log2 P^n(x) strictly
/// below n*a + sqrt(n)*b lies in a type class of size at most 2^(an+b*sqrt(n)).
/// Requires d^n <= cap.
InclusionCheck hayashi_inclusion_check(const SourceSpectrum& p, int n, double a, double b,
                                       std::uint64_t cap = kBruteForceCap);

/// Lower bound on the type-class code's ensemble average fidelity:
/// sum_j t_j * (mass of component j at or above the threshold eigenvalue
/// 2^(-n*a - sqrt(n)*b)).
double universal_achievability_fidelity(const MixedSourceSpec& m, int n, double a, double b,
                                        std::uint64_t cap = type_cap_from_env());

}  // namespace soca
