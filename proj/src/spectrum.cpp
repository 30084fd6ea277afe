#include "soca/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "soca/errors.hpp"

namespace soca {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLn2Inv = 1.4426950408889634;  // 1/ln(2)

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

double atom_mass(const SpectrumAtom& atom) {
    return std::exp2(log2_of(atom.multiplicity) + atom.log2_value);
}

/// log2(sum_j 2^{x_j}) with -inf entries contributing nothing.
double log2_sum_exp2(const std::vector<double>& xs) {
    double xmax = kNegInf;
    for (double x : xs) xmax = std::max(xmax, x);
    if (xmax == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double x : xs) acc += std::exp2(x - xmax);
    return xmax + std::log2(acc);
}

void require_block_length(int n) {
    if (n < 1) throw Error(ErrorCode::DomainError, "block length n must be >= 1");
}

void check_type_cap(int n, int d, std::uint64_t cap) {
    BigInt count = type_count(n, d);
    if (count > BigInt(static_cast<unsigned long>(cap))) {
        throw Error(ErrorCode::CapExceeded,
                    "n=" + std::to_string(n) + ", d=" + std::to_string(d) + " requires " +
                        count.get_str() + " type classes (cap " + std::to_string(cap) + ")");
    }
}

/// Enumerates compositions depth-first, keeping the exact type-class size as
/// a running product of binomials (updated by one small mul/div per step) and
/// per-component log2 eigenvalue partials. Calls emit(final-letter count,
/// size) at each leaf with rows[d-1] holding the partials before the last
/// letter.
class TypeScan {
  public:
    TypeScan(int n, int d, int num_components) : n_(n), d_(d), k_(num_components) {
        rows_.assign(static_cast<std::size_t>(d_) + 1, std::vector<double>(k_, 0.0));
    }

    /// log2_letter[j*d + i] = log2 p_j(i); -inf encodes zero probability.
    template <typename Emit>
    void run(const std::vector<double>& log2_letter, Emit&& emit) {
        log2_letter_ = &log2_letter;
        descend(0, n_, BigInt(1), emit);
    }

    const std::vector<double>& leaf_partials() const { return rows_[d_ - 1]; }

  private:
    double letter_contribution(int comp, int letter, int count) const {
        if (count == 0) return 0.0;
        return count * (*log2_letter_)[static_cast<std::size_t>(comp) * d_ + letter];
    }

    template <typename Emit>
    void descend(int pos, int remaining, const BigInt& size, Emit&& emit) {
        if (pos == d_ - 1) {
            emit(remaining, size);
            return;
        }
        // letter pos takes count c = remaining..0 with C(remaining, c) kept
        // incrementally: C(r, r) = 1, C(r, c-1) = C(r, c) * c / (r - c + 1).
        BigInt binom = 1;
        BigInt child;
        for (int c = remaining;; --c) {
            for (int j = 0; j < k_; ++j) {
                rows_[pos + 1][j] = rows_[pos][j] + letter_contribution(j, pos, c);
            }
            child = size * binom;
            descend(pos + 1, remaining - c, child, emit);
            if (c == 0) break;
            binom *= c;
            mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(),
                            static_cast<unsigned long>(remaining - c + 1));
        }
    }

    int n_, d_, k_;
    const std::vector<double>* log2_letter_ = nullptr;
    std::vector<std::vector<double>> rows_;  // rows_[pos][j]: partials before letter pos
};

std::vector<double> log2_letter_table(const MixedSourceSpec& m) {
    const int d = m.dim();
    std::vector<double> table(m.size() * d);
    for (std::size_t j = 0; j < m.size(); ++j) {
        for (int i = 0; i < d; ++i) {
            double p = m.components[j].spectrum.probs[i];
            table[j * d + i] = p > 0.0 ? std::log2(p) : kNegInf;
        }
    }
    return table;
}

std::uint64_t sequence_count_or_throw(int n, int d, std::uint64_t cap) {
    std::uint64_t count = 1;
    for (int i = 0; i < n; ++i) {
        if (count > cap / static_cast<std::uint64_t>(d)) {
            throw Error(ErrorCode::CapExceeded,
                        "d^n exceeds the brute-force cap " + std::to_string(cap));
        }
        count *= static_cast<std::uint64_t>(d);
    }
    return count;
}

}  // namespace

std::uint64_t type_cap_from_env() {
    if (const char* raw = std::getenv("SOCA_TYPE_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(raw, &end, 10);
        if (end != raw && *end == '\0' && v > 0) return v;
    }
    return kDefaultTypeCap;
}

BigInt type_count(int n, int d) {
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n) + d - 1,
                 static_cast<unsigned long>(d) - 1);
    return out;
}

void for_each_type(int n, int d, const std::function<void(const TypeComposition&)>& visit) {
    TypeComposition k;
    k.n = n;
    k.counts.assign(d, 0);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == d - 1) {
            k.counts[pos] = remaining;
            visit(k);
            return;
        }
        for (int c = remaining; c >= 0; --c) {
            k.counts[pos] = c;
            self(self, pos + 1, remaining - c);
        }
    };
    rec(rec, 0, n);
}

std::vector<TypeComposition> enumerate_types(int n, int d, std::uint64_t cap) {
    require_block_length(n);
    if (d < 1) throw Error(ErrorCode::DomainError, "dimension d must be >= 1");
    check_type_cap(n, d, cap);
    std::vector<TypeComposition> out;
    out.reserve(type_count(n, d).get_ui());
    for_each_type(n, d, [&](const TypeComposition& k) { out.push_back(k); });
    return out;
}

std::pair<double, BigInt> log2_multinomial(const TypeComposition& k) {
    long double lg = std::lgammal(static_cast<long double>(k.n) + 1.0L);
    for (int c : k.counts) lg -= std::lgammal(static_cast<long double>(c) + 1.0L);
    double log2_size = static_cast<double>(lg) * kLn2Inv;

    BigInt exact = 1;
    BigInt factor;
    unsigned long used = 0;
    for (int c : k.counts) {
        used += static_cast<unsigned long>(c);
        mpz_bin_uiui(factor.get_mpz_t(), used, static_cast<unsigned long>(c));
        exact *= factor;
    }
    return {log2_size, exact};
}

double mixed_type_value(const TypeComposition& k, const MixedSourceSpec& m) {
    validate_or_throw(m);
    std::vector<double> exponents(m.size());
    for (std::size_t j = 0; j < m.size(); ++j) {
        const auto& probs = m.components[j].spectrum.probs;
        double e = std::log2(m.components[j].weight);
        for (int i = 0; i < k.dim(); ++i) {
            if (k.counts[i] == 0) continue;
            e = probs[i] > 0.0 ? e + k.counts[i] * std::log2(probs[i]) : kNegInf;
            if (e == kNegInf) break;
        }
        exponents[j] = e;
    }
    return log2_sum_exp2(exponents);
}

Spectrum Spectrum::from_types(const MixedSourceSpec& m, int n, std::uint64_t cap) {
    validate_or_throw(m);
    require_block_length(n);
    const int d = m.dim();
    check_type_cap(n, d, cap);

    const auto table = log2_letter_table(m);
    std::vector<double> log2w(m.size());
    for (std::size_t j = 0; j < m.size(); ++j) log2w[j] = std::log2(m.components[j].weight);

    std::vector<SpectrumAtom> raw;
    std::vector<double> exponents(m.size());
    TypeScan scan(n, d, static_cast<int>(m.size()));
    scan.run(table, [&](int last_count, const BigInt& size) {
        const auto& partial = scan.leaf_partials();
        for (std::size_t j = 0; j < exponents.size(); ++j) {
            double tail = 0.0;
            if (last_count > 0) {
                double lp = table[j * d + (d - 1)];
                tail = lp == kNegInf ? kNegInf : last_count * lp;
            }
            exponents[j] = log2w[j] + partial[j] + tail;
        }
        double value = log2_sum_exp2(exponents);
        if (value != kNegInf) raw.push_back({value, size});
    });
    return merge_levels(std::move(raw));
}

Spectrum Spectrum::brute_force(const MixedSourceSpec& m, int n, std::uint64_t cap) {
    validate_or_throw(m);
    require_block_length(n);
    const int d = m.dim();
    sequence_count_or_throw(n, d, cap);

    std::vector<double> logs;
    std::vector<int> x(n, 0);
    for (;;) {
        double value = 0.0;
        for (const auto& comp : m.components) {
            double prod = comp.weight;
            for (int i = 0; i < n && prod > 0.0; ++i) prod *= comp.spectrum.probs[x[i]];
            value += prod;
        }
        if (value > 0.0) logs.push_back(std::log2(value));

        int pos = n - 1;
        while (pos >= 0 && x[pos] == d - 1) x[pos--] = 0;
        if (pos < 0) break;
        ++x[pos];
    }

    std::sort(logs.begin(), logs.end(), std::greater<>());
    std::vector<SpectrumAtom> atoms;
    std::size_t i = 0;
    while (i < logs.size()) {
        double anchor = logs[i];
        unsigned long count = 0;
        while (i < logs.size() && anchor - logs[i] <= kAtomMergeTol) {
            ++count;
            ++i;
        }
        atoms.push_back({anchor, BigInt(count)});
    }
    Spectrum out;
    out.atoms_ = std::move(atoms);
    return out;
}

Spectrum Spectrum::merge_levels(std::vector<SpectrumAtom> raw) {
    std::sort(raw.begin(), raw.end(),
              [](const SpectrumAtom& a, const SpectrumAtom& b) {
                  return a.log2_value > b.log2_value;
              });
    Spectrum out;
    for (auto& atom : raw) {
        if (!out.atoms_.empty() &&
            out.atoms_.back().log2_value - atom.log2_value <= kAtomMergeTol) {
            out.atoms_.back().multiplicity += atom.multiplicity;
        } else {
            out.atoms_.push_back(std::move(atom));
        }
    }
    return out;
}

double Spectrum::total_mass() const {
    KahanSum sum;
    for (const auto& atom : atoms_) sum.add(atom_mass(atom));
    return sum.sum;
}

double Spectrum::tail_mass(double gamma) const {
    KahanSum sum;
    for (auto it = atoms_.rbegin(); it != atoms_.rend() && it->log2_value <= gamma; ++it) {
        sum.add(atom_mass(*it));
    }
    return std::clamp(sum.sum, 0.0, 1.0);  // rounding can overshoot by an ulp
}

double Spectrum::tail_mass_strict(double gamma) const {
    KahanSum sum;
    for (auto it = atoms_.rbegin(); it != atoms_.rend() && it->log2_value < gamma; ++it) {
        sum.add(atom_mass(*it));
    }
    return std::clamp(sum.sum, 0.0, 1.0);
}

double Spectrum::tail_quantile(double eps) const {
    KahanSum cumulative;
    for (auto it = atoms_.rbegin(); it != atoms_.rend(); ++it) {
        cumulative.add(atom_mass(*it));
        if (cumulative.sum > eps) return it->log2_value;
    }
    return atoms_.front().log2_value;
}

Spectrum::Compression Spectrum::min_compression(double eps) const {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw Error(ErrorCode::DomainError, "eps must lie in (0,1)");
    }
    const double target = 1.0 - eps;
    Compression out;
    out.dim = 0;
    KahanSum acc;
    for (const auto& atom : atoms_) {
        double mass = atom_mass(atom);
        if (acc.sum + mass < target) {
            acc.add(mass);
            out.dim += atom.multiplicity;
            continue;
        }
        // Partial take from this level: smallest count whose mass covers the
        // remaining deficit.
        double deficit = target - acc.sum;
        BigInt count;
        if (atom.log2_value > -900.0) {
            double ratio = deficit / std::exp2(atom.log2_value);
            if (ratio < 9e15) {
                count = BigInt(static_cast<unsigned long>(std::ceil(ratio)));
            } else {
                count = ceil_exp2(std::log2(deficit) - atom.log2_value);
            }
        } else {
            count = ceil_exp2(std::log2(deficit) - atom.log2_value);
        }
        if (count < 1) count = 1;
        if (count > atom.multiplicity) count = atom.multiplicity;
        out.dim += count;
        out.log2_dim = log2_of(out.dim);
        return out;
    }
    out.log2_dim = out.dim > 0 ? log2_of(out.dim) : kNegInf;
    return out;
}

Spectrum exact_spectrum(const MixedSourceSpec& m, int n, std::uint64_t cap) {
    return Spectrum::from_types(m, n, cap);
}

Spectrum brute_force_spectrum(const MixedSourceSpec& m, int n, std::uint64_t cap) {
    return Spectrum::brute_force(m, n, cap);
}

double spectral_tail(const MixedSourceSpec& m, int n, double gamma, std::uint64_t cap) {
    return Spectrum::from_types(m, n, cap).tail_mass(gamma);
}

double d_s_eps(const MixedSourceSpec& m, int n, double eps, std::uint64_t cap) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw Error(ErrorCode::DomainError, "eps must lie in (0,1)");
    }
    return Spectrum::from_types(m, n, cap).tail_quantile(eps);
}

Spectrum::Compression min_compression_length(const MixedSourceSpec& m, int n, double eps,
                                             std::uint64_t cap) {
    return Spectrum::from_types(m, n, cap).min_compression(eps);
}

double fidelity_converse_rhs(const MixedSourceSpec& m, int n, double gamma, double log2_M,
                             std::uint64_t cap) {
    validate_or_throw(m);
    require_block_length(n);
    double tails = 0.0;
    for (const auto& comp : m.components) {
        Spectrum s = Spectrum::from_types(as_mixture(comp.spectrum), n, cap);
        tails += comp.weight * s.tail_mass(-gamma);
    }
    return 1.0 - tails + std::exp2(log2_M - gamma);
}

MixedSourceSpec as_mixture(const SourceSpectrum& p) {
    MixedSourceSpec m;
    m.components.push_back({1.0, p});
    return m;
}

}  // namespace soca
