#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "soca/bigint.hpp"
#include "soca/model.hpp"

namespace soca {

inline constexpr std::uint64_t kDefaultTypeCap = 5'000'000;
inline constexpr std::uint64_t kBruteForceCap = 1'000'000;  // on d^n
inline constexpr double kAtomMergeTol = 1e-12;              // absolute, in log2

/// Active type-count cap: SOCA_TYPE_CAP when set, else the default.
std::uint64_t type_cap_from_env();

/// Letter-count vector of a block: counts[i] occurrences of letter i, summing
/// to the block length n.
struct TypeComposition {
    std::vector<int> counts;
    int n = 0;

    int dim() const { return static_cast<int>(counts.size()); }
};

/// Number of compositions of n into d parts, C(n+d-1, d-1), exactly.
BigInt type_count(int n, int d);

/// Visits every composition of n into d parts once, first coordinate
/// decreasing (the order enumerate_types documents). No cap check.
void for_each_type(int n, int d, const std::function<void(const TypeComposition&)>& visit);

/// All compositions of n into d parts in enumeration order.
/// Throws Error(CapExceeded) when C(n+d-1, d-1) > cap.
std::vector<TypeComposition> enumerate_types(int n, int d,
                                             std::uint64_t cap = type_cap_from_env());

/// log2 of the number of sequences in the type class (log-gamma route) and
/// the same count exactly. The two routes agree to ~1e-9 in log2.
std::pair<double, BigInt> log2_multinomial(const TypeComposition& k);

/// log2 of the per-sequence eigenvalue of the blocklength-n mixture state for
/// one type: log2 of sum_j t_j * prod_i p_j(i)^{k_i}, via base-2 log-sum-exp.
/// Components that put zero probability on an occupied letter contribute
/// nothing; -infinity when every component does.
double mixed_type_value(const TypeComposition& k, const MixedSourceSpec& m);

/// One eigenvalue level of the blocklength-n source state.
struct SpectrumAtom {
    double log2_value = 0.0;
    BigInt multiplicity;
};

/// The full eigenvalue spectrum of the blocklength-n mixture state, as merged
/// atoms sorted by log2_value descending. Zero eigenvalues are not stored.
class Spectrum {
  public:
    /// Exact spectrum aggregated over type classes.
    static Spectrum from_types(const MixedSourceSpec& m, int n,
                               std::uint64_t cap = type_cap_from_env());

    /// Independent construction enumerating all d^n sequences one by one.
    /// Requires d^n <= cap (default 1e6).
    static Spectrum brute_force(const MixedSourceSpec& m, int n,
                                std::uint64_t cap = kBruteForceCap);

    const std::vector<SpectrumAtom>& atoms() const { return atoms_; }

    /// Total probability mass, compensated summation. Equals 1 up to rounding.
    double total_mass() const;

    /// Mass at or below the threshold: sum of multiplicity * 2^log2_value over
    /// atoms with log2_value <= gamma (inclusive).
    double tail_mass(double gamma) const;

    /// Same with strict comparison log2_value < gamma.
    double tail_mass_strict(double gamma) const;

    /// Largest threshold whose inclusive tail mass stays <= eps: the value of
    /// the first level (ascending) whose cumulative mass exceeds eps.
    double tail_quantile(double eps) const;

    struct Compression {
        BigInt dim;       // smallest subspace dimension reaching the target
        double log2_dim;  // log2 of it
    };

    /// Smallest M with the top-M eigenvalue sum >= 1 - eps (inclusive).
    Compression min_compression(double eps) const;

  private:
    static Spectrum merge_levels(std::vector<SpectrumAtom> raw);

    std::vector<SpectrumAtom> atoms_;  // sorted descending by log2_value
};

// Convenience forms used by the CLI and studies.
Spectrum exact_spectrum(const MixedSourceSpec& m, int n,
                        std::uint64_t cap = type_cap_from_env());
Spectrum brute_force_spectrum(const MixedSourceSpec& m, int n,
                              std::uint64_t cap = kBruteForceCap);
double spectral_tail(const MixedSourceSpec& m, int n, double gamma,
                     std::uint64_t cap = type_cap_from_env());
double d_s_eps(const MixedSourceSpec& m, int n, double eps,
               std::uint64_t cap = type_cap_from_env());
Spectrum::Compression min_compression_length(const MixedSourceSpec& m, int n, double eps,
                                             std::uint64_t cap = type_cap_from_env());

/// Upper bound on the ensemble average fidelity of any blocklength-n code of
/// log-dimension log2_M: 1 - sum_j t_j * tail_j(-gamma) + 2^(log2_M - gamma),
/// with tail_j the inclusive spectral tail of component j alone.
double fidelity_converse_rhs(const MixedSourceSpec& m, int n, double gamma, double log2_M,
                             std::uint64_t cap = type_cap_from_env());

/// Wraps one spectrum as a single-component mixture (weight 1).
MixedSourceSpec as_mixture(const SourceSpectrum& p);

}  // namespace soca
