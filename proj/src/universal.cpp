#include "soca/universal.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>

#include "soca/errors.hpp"

namespace soca {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogGuardBand = 1e-9;  // log2 proximity that counts as a boundary hit

struct ThresholdState {
    double theta = 0.0;  // a*n + b*sqrt(n)
    bool exact_path = false;
    unsigned long floor_threshold = 0;  // floor(2^theta) when exact_path
    BigInt xi;
    int guard_hits = 0;
};

ThresholdState make_threshold(int n, double a, double b) {
    ThresholdState st;
    st.theta = a * n + b * std::sqrt(static_cast<double>(n));
    st.exact_path = st.theta < 63.0;
    if (st.exact_path) {
        st.floor_threshold =
            st.theta < 0.0 ? 0ul : static_cast<unsigned long>(std::floor(std::exp2(st.theta)));
    }
    st.xi = 0;
    return st;
}

/// |T| <= 2^theta: integer comparison against floor(2^theta) while that fits,
/// exact-mantissa log2 comparison beyond.
bool qualifies(const ThresholdState& st, const BigInt& size, double log2_size) {
    if (st.exact_path) return mpz_cmp_ui(size.get_mpz_t(), st.floor_threshold) <= 0;
    return log2_size <= st.theta;
}

void scan_exact_sizes(int n, int d, const std::function<void(const BigInt&, double)>& leaf) {
    // Depth-first over compositions; the exact type-class size rides along as
    // a product of binomials updated incrementally per letter count.
    auto rec = [&](auto&& self, int pos, int remaining, const BigInt& size) -> void {
        if (pos == d - 1) {
            leaf(size, log2_of(size));
            return;
        }
        BigInt binom = 1;
        BigInt child;
        for (int c = remaining;; --c) {
            child = size * binom;
            self(self, pos + 1, remaining - c, child);
            if (c == 0) break;
            binom *= c;
            mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(),
                            static_cast<unsigned long>(remaining - c + 1));
        }
    };
    rec(rec, 0, n, BigInt(1));
}

}  // namespace

std::vector<UniversalDims> universal_dims_multi(int n, int d,
                                                const std::vector<std::pair<double, double>>& ab,
                                                std::uint64_t cap) {
    if (n < 1 || d < 1) {
        throw Error(ErrorCode::DomainError, "universal_dims requires n >= 1 and d >= 1");
    }
    BigInt count = type_count(n, d);
    if (count > BigInt(static_cast<unsigned long>(cap))) {
        throw Error(ErrorCode::CapExceeded,
                    "n=" + std::to_string(n) + ", d=" + std::to_string(d) + " requires " +
                        count.get_str() + " type classes (cap " + std::to_string(cap) + ")");
    }

    std::vector<ThresholdState> states;
    states.reserve(ab.size());
    for (auto [a, b] : ab) states.push_back(make_threshold(n, a, b));

    scan_exact_sizes(n, d, [&](const BigInt& size, double log2_size) {
        for (auto& st : states) {
            if (std::abs(log2_size - st.theta) <= kLogGuardBand) ++st.guard_hits;
            if (qualifies(st, size, log2_size)) st.xi += size;
        }
    });

    const double log2_np1 = std::log2(static_cast<double>(n) + 1.0);
    std::vector<UniversalDims> out;
    out.reserve(states.size());
    for (auto& st : states) {
        UniversalDims dims;
        dims.xi_exact = std::move(st.xi);
        dims.log2_xi = dims.xi_exact > 0 ? log2_of(dims.xi_exact) : kNegInf;
        dims.log2_upsilon_bound = (static_cast<double>(d) * d + d) * log2_np1 + st.theta;
        dims.boundary_guard_hits = st.guard_hits;
        out.push_back(std::move(dims));
    }
    return out;
}

UniversalDims universal_dims(int n, int d, double a, double b, std::uint64_t cap) {
    return universal_dims_multi(n, d, {{a, b}}, cap)[0];
}

InclusionCheck hayashi_inclusion_check(const SourceSpectrum& p, int n, double a, double b,
                                       std::uint64_t cap) {
    validate_or_throw(as_mixture(p));
    if (n < 1) throw Error(ErrorCode::DomainError, "block length n must be >= 1");
    const int d = p.dim();

    std::uint64_t seqs = 1;
    for (int i = 0; i < n; ++i) {
        if (seqs > cap / static_cast<std::uint64_t>(d)) {
            throw Error(ErrorCode::CapExceeded,
                        "d^n exceeds the brute-force cap " + std::to_string(cap));
        }
        seqs *= static_cast<std::uint64_t>(d);
    }

    const ThresholdState threshold = make_threshold(n, a, b);

    std::vector<double> neg_log2(d);
    for (int i = 0; i < d; ++i) {
        neg_log2[i] = p.probs[i] > 0.0 ? -std::log2(p.probs[i])
                                       : std::numeric_limits<double>::infinity();
    }

    std::map<std::vector<int>, bool> type_ok;
    InclusionCheck result;
    std::vector<int> x(n, 0);
    std::vector<int> counts(d, 0);
    for (;;) {
        double neg_log_prob = 0.0;
        for (int i = 0; i < n; ++i) neg_log_prob += neg_log2[x[i]];
        if (neg_log_prob < threshold.theta) {
            std::fill(counts.begin(), counts.end(), 0);
            for (int i = 0; i < n; ++i) ++counts[x[i]];
            auto [it, inserted] = type_ok.try_emplace(counts, false);
            if (inserted) {
                TypeComposition k;
                k.counts = counts;
                k.n = n;
                const BigInt size = log2_multinomial(k).second;
                it->second = qualifies(threshold, size, log2_of(size));
            }
            if (!it->second) {
                result.holds = false;
                result.counterexample = x;
                return result;
            }
        }
        int pos = n - 1;
        while (pos >= 0 && x[pos] == d - 1) x[pos--] = 0;
        if (pos < 0) break;
        ++x[pos];
    }
    return result;
}

double universal_achievability_fidelity(const MixedSourceSpec& m, int n, double a, double b,
                                        std::uint64_t cap) {
    validate_or_throw(m);
    const double gamma = -a * n - b * std::sqrt(static_cast<double>(n));
    double bound = 0.0;
    for (const auto& comp : m.components) {
        Spectrum s = Spectrum::from_types(as_mixture(comp.spectrum), n, cap);
        bound += comp.weight * (1.0 - s.tail_mass_strict(gamma));
    }
    return bound;
}

}  // namespace soca
