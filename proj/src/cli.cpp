#include "soca/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "soca/experiments.hpp"
#include "soca/gaussian.hpp"
#include "soca/model.hpp"
#include "soca/rates.hpp"
#include "soca/spectrum.hpp"
#include "soca/universal.hpp"

namespace soca::cli {
namespace {

std::string fmt(double v) {
    if (v == 0.0) v = 0.0;  // never print -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Grid syntax: either a comma list "a,b,c" or "start:stop:step" inclusive of
/// the endpoints within half a step.
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double start = 0, stop = 0, step = 0;
        char extra = 0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &extra) != 3 ||
            !(step > 0.0) || stop < start) {
            throw Error(ErrorCode::BadInput, "bad grid '" + text + "': want start:stop:step");
        }
        for (int i = 0;; ++i) {
            double v = start + i * step;
            if (v > stop + 0.5 * step) break;
            out.push_back(v);
        }
        return out;
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) {
            throw Error(ErrorCode::BadInput, "bad grid value '" + tok + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw Error(ErrorCode::BadInput, "empty grid '" + text + "'");
    return out;
}

std::vector<int> parse_int_grid(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_grid(text)) {
        int n = static_cast<int>(std::lround(v));
        if (std::abs(v - n) > 1e-9 || n < 1) {
            throw Error(ErrorCode::BadInput, "grid entry " + fmt(v) + " is not a positive integer");
        }
        out.push_back(n);
    }
    return out;
}

const std::string kDefaultNGrid = "64,128,256,512,1024,2048,4096";

SourceSpectrum single_spectrum(const MixedSourceSpec& m) {
    if (m.size() != 1) {
        throw Error(ErrorCode::BadInput,
                    "this subcommand needs a source spec with exactly one component");
    }
    return m.components.front().spectrum;
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::CapExceeded:
            return kExitCapExceeded;
        case ErrorCode::DegenerateSigma:
        case ErrorCode::BoundaryTEqualsEps:
            return kExitInfeasible;
        default:
            return kExitBadInput;
    }
}

struct Options {
    std::string spec_path;
    std::string output;
    int n = 1;
    int d = 2;
    double eps = 0.5;
    double a = 0.0;
    double b = 0.0;
    double gamma = 0.0;
    double eta = kDefaultEntropyEta;
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    double s1 = 0.0;
    double s2 = 0.0;
    double t = 0.5;
    double c = 0.0;
    double wrong_a = 0.0;
    std::string n_grid = kDefaultNGrid;
    std::string l_grid = "-2,-1,0,1,2";
    std::string eps_grid = "0.01:0.99:0.01";
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"second-order rates and exact finite-blocklength oracles for mixed sources"};
    app.require_subcommand(1);
    Options opt;

    auto add_spec = [&](CLI::App* cmd) {
        cmd->add_option("spec", opt.spec_path, "source spec JSON file")->required();
    };
    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("--output", opt.output, "write to this file instead of stdout");
    };

    auto* stats_cmd = app.add_subcommand("stats", "per-component entropy, varentropy, sigma");
    add_spec(stats_cmd);
    add_output(stats_cmd);

    auto* rate_cmd = app.add_subcommand("rate", "solve the second-order rate equation");
    rate_cmd->add_option("--a", opt.a, "first-order rate candidate (bits)")->required();
    rate_cmd->add_option("--eps", opt.eps, "error threshold in (0,1)")->required();
    rate_cmd->add_option("--eta", opt.eta, "entropy comparison tolerance (bits)");
    add_spec(rate_cmd);
    add_output(rate_cmd);

    auto* rate2_cmd = app.add_subcommand("rate-two", "two-source rate with automatic case");
    rate2_cmd->add_option("--s1", opt.s1, "entropy of source 1 (bits)")->required();
    rate2_cmd->add_option("--sigma1", opt.sigma1, "sigma of source 1")->required();
    rate2_cmd->add_option("--s2", opt.s2, "entropy of source 2 (bits)")->required();
    rate2_cmd->add_option("--sigma2", opt.sigma2, "sigma of source 2")->required();
    rate2_cmd->add_option("--t", opt.t, "weight of source 1")->required();
    rate2_cmd->add_option("--eps", opt.eps, "error threshold in (0,1)")->required();
    rate2_cmd->add_option("--eta", opt.eta, "entropy comparison tolerance (bits)");
    add_output(rate2_cmd);

    auto* oracle_cmd = app.add_subcommand("oracle", "exact minimum compression length");
    oracle_cmd->add_option("--n", opt.n, "block length")->required();
    oracle_cmd->add_option("--eps", opt.eps, "error threshold in (0,1)")->required();
    add_spec(oracle_cmd);
    add_output(oracle_cmd);

    auto* tail_cmd = app.add_subcommand("tail", "spectral tail mass at a log2 threshold");
    tail_cmd->add_option("--n", opt.n, "block length")->required();
    tail_cmd->add_option("--gamma", opt.gamma, "log2 threshold")->required();
    add_spec(tail_cmd);
    add_output(tail_cmd);

    auto* dseps_cmd = app.add_subcommand("dseps", "information-spectrum threshold at eps");
    dseps_cmd->add_option("--n", opt.n, "block length")->required();
    dseps_cmd->add_option("--eps", opt.eps, "tail mass budget in (0,1)")->required();
    add_spec(dseps_cmd);
    add_output(dseps_cmd);

    auto* udim_cmd = app.add_subcommand("universal-dim", "type-class code dimension accounting");
    udim_cmd->add_option("--n", opt.n, "block length")->required();
    udim_cmd->add_option("--d", opt.d, "alphabet size")->required();
    udim_cmd->add_option("--a", opt.a, "linear threshold coefficient")->required();
    udim_cmd->add_option("--b", opt.b, "sqrt threshold coefficient")->required();
    add_output(udim_cmd);

    auto* incl_cmd = app.add_subcommand("inclusion", "typical-set inclusion brute-force check");
    incl_cmd->add_option("--n", opt.n, "block length")->required();
    incl_cmd->add_option("--a", opt.a, "linear threshold coefficient")->required();
    incl_cmd->add_option("--b", opt.b, "sqrt threshold coefficient")->required();
    add_spec(incl_cmd);
    add_output(incl_cmd);

    auto* conv_cmd = app.add_subcommand("converge", "oracle length vs predicted expansion");
    conv_cmd->add_option("--eps", opt.eps, "error threshold in (0,1)")->required();
    conv_cmd->add_option("--eta", opt.eta, "entropy comparison tolerance (bits)");
    conv_cmd->add_option("--n-grid", opt.n_grid, "block lengths (list or start:stop:step)");
    add_spec(conv_cmd);
    add_output(conv_cmd);

    auto* be_cmd = app.add_subcommand("berry-esseen", "tail vs gaussian across block lengths");
    be_cmd->add_option("--l-grid", opt.l_grid, "L values (list or start:stop:step)");
    be_cmd->add_option("--n-grid", opt.n_grid, "block lengths (list or start:stop:step)");
    add_spec(be_cmd);
    add_output(be_cmd);

    auto* dom_cmd = app.add_subcommand("dominance", "tail crossover of two sources");
    dom_cmd->add_option("--c", opt.c, "sqrt-term offset");
    dom_cmd->add_option("--n-grid", opt.n_grid, "block lengths (list or start:stop:step)");
    add_spec(dom_cmd);
    add_output(dom_cmd);

    auto* fig_cmd = app.add_subcommand("figure1", "equal-entropy solution across eps");
    fig_cmd->add_option("--sigma1", opt.sigma1, "sigma of source 1")->required();
    fig_cmd->add_option("--sigma2", opt.sigma2, "sigma of source 2")->required();
    fig_cmd->add_option("--t", opt.t, "weight of source 1")->required();
    fig_cmd->add_option("--eps-grid", opt.eps_grid, "eps values (list or start:stop:step)");
    add_output(fig_cmd);

    auto* div_cmd = app.add_subcommand("diverge", "normalized length around a wrong rate");
    div_cmd->add_option("--eps", opt.eps, "error threshold in (0,1)")->required();
    div_cmd->add_option("--wrong-a", opt.wrong_a, "deliberately wrong first-order rate")
        ->required();
    div_cmd->add_option("--eta", opt.eta, "entropy comparison tolerance (bits)");
    div_cmd->add_option("--n-grid", opt.n_grid, "block lengths (list or start:stop:step)");
    add_spec(div_cmd);
    add_output(div_cmd);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitBadInput;
    }

    std::ostringstream buffer;
    try {
        if (stats_cmd->parsed()) {
            auto m = load_spec_file(opt.spec_path);
            for (std::size_t j = 0; j < m.size(); ++j) {
                SourceStats st = stats(m.components[j].spectrum);
                buffer << "S_" << j << "=" << fmt(st.entropy) << "\n"
                       << "V_" << j << "=" << fmt(st.varentropy) << "\n"
                       << "sigma_" << j << "=" << fmt(st.sigma) << "\n";
            }
        } else if (rate_cmd->parsed()) {
            auto m = load_spec_file(opt.spec_path);
            RateResult r = solve_second_order(m, {opt.a, opt.eps}, opt.eta);
            if (!r.is_finite()) {
                err << "rate equation has no finite solution at a=" << fmt(opt.a)
                    << ": b=" << fmt(r.b_star) << "\n";
                return kExitInfeasible;
            }
            buffer << "a=" << fmt(opt.a) << "\n"
                   << "b=" << fmt(r.b_star) << "\n"
                   << "case=" << to_string(r.case_tag) << "\n";
        } else if (rate2_cmd->parsed()) {
            SourceStats s1{opt.s1, opt.sigma1 * opt.sigma1, opt.sigma1};
            SourceStats s2{opt.s2, opt.sigma2 * opt.sigma2, opt.sigma2};
            TwoSourceRate r = two_source_rate(s1, s2, opt.t, opt.eps, opt.eta);
            buffer << "a=" << fmt(r.first_order_rate) << "\n"
                   << "b=" << fmt(r.rate.b_star) << "\n"
                   << "case=" << to_string(r.rate.case_tag) << "\n";
        } else if (oracle_cmd->parsed()) {
            auto m = load_spec_file(opt.spec_path);
            auto compression = min_compression_length(m, opt.n, opt.eps);
            buffer << "log2_M=" << fmt(compression.log2_dim) << "\n"
                   << "M=" << compression.dim.get_str() << "\n";
        } else if (tail_cmd->parsed()) {
            auto m = load_spec_file(opt.spec_path);
            buffer << "tail=" << fmt(spectral_tail(m, opt.n, opt.gamma)) << "\n";
        } else if (dseps_cmd->parsed()) {
            auto m = load_spec_file(opt.spec_path);
            buffer << "dseps=" << fmt(d_s_eps(m, opt.n, opt.eps)) << "\n";
        } else if (udim_cmd->parsed()) {
            UniversalDims dims = universal_dims(opt.n, opt.d, opt.a, opt.b);
            buffer << "log2_xi=" << fmt(dims.log2_xi) << "\n"
                   << "xi=" << dims.xi_exact.get_str() << "\n"
                   << "log2_upsilon_bound=" << fmt(dims.log2_upsilon_bound) << "\n"
                   << "guard_hits=" << dims.boundary_guard_hits << "\n";
        } else if (incl_cmd->parsed()) {
            auto p = single_spectrum(load_spec_file(opt.spec_path));
            InclusionCheck check = hayashi_inclusion_check(p, opt.n, opt.a, opt.b);
            buffer << "holds=" << (check.holds ? "true" : "false") << "\n";
            if (check.counterexample) {
                buffer << "counterexample=";
                for (std::size_t i = 0; i < check.counterexample->size(); ++i) {
                    if (i) buffer << ",";
                    buffer << (*check.counterexample)[i];
                }
                buffer << "\n";
            }
        } else if (conv_cmd->parsed()) {
            auto m = load_spec_file(opt.spec_path);
            buffer << convergence_study(m, opt.eps, parse_int_grid(opt.n_grid), opt.eta).to_csv();
        } else if (be_cmd->parsed()) {
            auto p = single_spectrum(load_spec_file(opt.spec_path));
            buffer << berry_esseen_study(p, parse_grid(opt.l_grid), parse_int_grid(opt.n_grid))
                          .to_csv();
        } else if (dom_cmd->parsed()) {
            auto m = load_spec_file(opt.spec_path);
            if (m.size() != 2) {
                throw Error(ErrorCode::BadInput,
                            "dominance needs a spec with exactly two components");
            }
            buffer << dominance_study(m.components[0].spectrum, m.components[1].spectrum, opt.c,
                                      parse_int_grid(opt.n_grid))
                          .to_csv();
        } else if (fig_cmd->parsed()) {
            buffer << figure1_curve(opt.sigma1, opt.sigma2, opt.t, parse_grid(opt.eps_grid))
                          .to_csv();
        } else if (div_cmd->parsed()) {
            auto m = load_spec_file(opt.spec_path);
            buffer << first_order_divergence_check(m, opt.eps, opt.wrong_a,
                                                   parse_int_grid(opt.n_grid), opt.eta)
                          .to_csv();
        }
    } catch (const Error& e) {
        err << to_string(e.code()) << ": " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    }

    if (!opt.output.empty()) {
        std::ofstream file(opt.output, std::ios::binary);
        if (!file) {
            err << "cannot write " << opt.output << "\n";
            return kExitBadInput;
        }
        file << buffer.str();
    } else {
        out << buffer.str();
    }
    return kExitOk;
}

}  // namespace soca::cli
