#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "soca/errors.hpp"

namespace soca {

inline constexpr double kNormalizationTol = 1e-12;  // on probability sums
inline constexpr double kDefaultEntropyEta = 1e-9;  // bits, entropy classification

/// Eigenvalue distribution of one memoryless source. All quantities downstream
/// depend on the source state only through this vector.
struct SourceSpectrum {
    std::vector<double> probs;

    int dim() const { return static_cast<int>(probs.size()); }
};

/// Finite mixture of memoryless sources over a shared eigenbasis:
/// weights t_j and per-component spectra, all of one dimension.
struct MixedSourceSpec {
    struct Component {
        double weight = 0.0;
        SourceSpectrum spectrum;
    };
    std::vector<Component> components;

    int dim() const { return components.empty() ? 0 : components.front().spectrum.dim(); }
    std::size_t size() const { return components.size(); }
};

/// Entropy (bits), varentropy (bits^2) and its square root for one spectrum.
struct SourceStats {
    double entropy = 0.0;
    double varentropy = 0.0;
    double sigma = 0.0;
};

/// Partition of mixture components by entropy relative to a candidate rate:
/// equal within eta, strictly below, strictly above.
struct EntropyClasses {
    std::vector<std::size_t> eq_idx;
    std::vector<std::size_t> lt_idx;
    std::vector<std::size_t> gt_idx;
    double tolerance_eta = kDefaultEntropyEta;
};

/// Checks every invariant and returns the full list of violations (empty
/// means valid).
std::vector<Violation> validate_mixed(const MixedSourceSpec& spec);

/// Throws Error with the first violation if the spec is invalid.
void validate_or_throw(const MixedSourceSpec& spec);

/// Shannon/von Neumann entropy in bits, -sum p log2 p with 0 log 0 = 0.
double entropy(const SourceSpectrum& s);

/// Varentropy in bits^2: the variance of -log2 p under p. Computed around the
/// mean so rounding can never drive it negative.
double varentropy(const SourceSpectrum& s);

SourceStats stats(const SourceSpectrum& s);

/// Splits component indices into entropy == a (within eta), < a, > a.
EntropyClasses classify_by_entropy(const MixedSourceSpec& m, double a,
                                   double eta = kDefaultEntropyEta);

/// Reads the JSON source-spec schema:
///   { "components": [ { "weight": w, "eigenvalues": [p1, ...] }, ... ] }
/// Parse errors throw Error(BadInput); the result is validated.
MixedSourceSpec load_spec_json(std::istream& in);
MixedSourceSpec load_spec_file(const std::string& path);

}  // namespace soca
