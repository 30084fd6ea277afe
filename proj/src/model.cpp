#include "soca/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace soca {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NegativeProbability: return "NegativeProbability";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::EmptySpec: return "EmptySpec";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::DegenerateSigma: return "DegenerateSigma";
        case ErrorCode::BoundaryTEqualsEps: return "BoundaryTEqualsEps";
        case ErrorCode::EntropyOrder: return "EntropyOrder";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::BadInput: return "BadInput";
    }
    return "Unknown";
}

namespace {

std::string format_sum(double sum) {
    std::ostringstream os;
    os.precision(17);
    os << sum;
    return os.str();
}

}  // namespace

std::vector<Violation> validate_mixed(const MixedSourceSpec& spec) {
    std::vector<Violation> out;
    if (spec.components.empty()) {
        out.push_back({ErrorCode::EmptySpec, "spec has no components"});
        return out;
    }
    const int dim0 = spec.components.front().spectrum.dim();
    double weight_sum = 0.0;
    for (std::size_t j = 0; j < spec.components.size(); ++j) {
        const auto& comp = spec.components[j];
        const auto& probs = comp.spectrum.probs;
        if (!(comp.weight > 0.0)) {
            out.push_back({ErrorCode::NegativeProbability,
                           "component " + std::to_string(j) + ": weight must be > 0"});
        }
        weight_sum += comp.weight;
        if (probs.empty()) {
            out.push_back({ErrorCode::EmptySpec,
                           "component " + std::to_string(j) + ": empty eigenvalue list"});
            continue;
        }
        if (comp.spectrum.dim() != dim0) {
            out.push_back({ErrorCode::DimensionMismatch,
                           "component " + std::to_string(j) + ": dim " +
                               std::to_string(comp.spectrum.dim()) + " != dim " +
                               std::to_string(dim0) + " of component 0"});
        }
        double prob_sum = 0.0;
        bool negative = false;
        for (double p : probs) {
            if (p < 0.0) negative = true;
            prob_sum += p;
        }
        if (negative) {
            out.push_back({ErrorCode::NegativeProbability,
                           "component " + std::to_string(j) + ": negative eigenvalue"});
        }
        if (!(std::abs(prob_sum - 1.0) <= kNormalizationTol)) {  // NaN-safe
            out.push_back({ErrorCode::NotNormalized,
                           "component " + std::to_string(j) + ": eigenvalues sum to " +
                               format_sum(prob_sum)});
        }
    }
    if (!(std::abs(weight_sum - 1.0) <= kNormalizationTol)) {
        out.push_back({ErrorCode::NotNormalized,
                       "weights sum to " + format_sum(weight_sum)});
    }
    return out;
}

void validate_or_throw(const MixedSourceSpec& spec) {
    auto violations = validate_mixed(spec);
    if (!violations.empty()) {
        std::string msg = violations.front().message;
        if (violations.size() > 1) {
            msg += " (+" + std::to_string(violations.size() - 1) + " more)";
        }
        throw Error(violations.front().code, msg);
    }
}

double entropy(const SourceSpectrum& s) {
    double sum = 0.0;
    for (double p : s.probs) {
        if (p > 0.0) sum -= p * std::log2(p);
    }
    return sum;
}

double varentropy(const SourceSpectrum& s) {
    const double mean = entropy(s);
    double sum = 0.0;
    for (double p : s.probs) {
        if (p > 0.0) {
            double dev = std::log2(p) + mean;
            sum += p * dev * dev;
        }
    }
    return sum;
}

SourceStats stats(const SourceSpectrum& s) {
    SourceStats st;
    st.entropy = entropy(s);
    st.varentropy = varentropy(s);
    st.sigma = std::sqrt(st.varentropy);
    return st;
}

EntropyClasses classify_by_entropy(const MixedSourceSpec& m, double a, double eta) {
    EntropyClasses cls;
    cls.tolerance_eta = eta;
    for (std::size_t j = 0; j < m.components.size(); ++j) {
        double s = entropy(m.components[j].spectrum);
        if (std::abs(s - a) <= eta) {
            cls.eq_idx.push_back(j);
        } else if (s < a) {
            cls.lt_idx.push_back(j);
        } else {
            cls.gt_idx.push_back(j);
        }
    }
    return cls;
}

MixedSourceSpec load_spec_json(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::BadInput, std::string("malformed JSON: ") + e.what());
    }
    MixedSourceSpec spec;
    try {
        for (const auto& item : doc.at("components")) {
            MixedSourceSpec::Component comp;
            comp.weight = item.at("weight").get<double>();
            comp.spectrum.probs = item.at("eigenvalues").get<std::vector<double>>();
            spec.components.push_back(std::move(comp));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::BadInput, std::string("bad source spec: ") + e.what());
    }
    validate_or_throw(spec);
    return spec;
}

MixedSourceSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::BadInput, "cannot open " + path);
    return load_spec_json(in);
}

}  // namespace soca
