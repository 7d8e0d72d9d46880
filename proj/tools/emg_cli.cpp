// Command-line frontend: equilibrium verification, parameter sweeps, welfare
// tables, closed-form bounds, protocol dumps and Monte Carlo simulation.
//
// Exit codes: 0 success (or verified equilibrium), 2 refutation, 1 error.

#include "emg/emg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace emg;

GameParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open params file: " + path);
    nlohmann::json j;
    in >> j;
    GameParams g = params_from_json(j);
    validate_or_throw(g);
    return g;
}

StrategyProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile file: " + path);
    nlohmann::json j;
    in >> j;
    return profile_from_json(j);
}

Family parse_family_name(std::string name, const std::string& lead) {
    for (auto& c : name)
        if (c == '-') c = '_';
    if (name == "asym") {
        if (lead == "T") return Family::AsymT;
        if (lead == "Z") return Family::AsymZ;
        throw std::runtime_error("family 'asym' needs --lead T or --lead Z");
    }
    if (name == "asym_t") return Family::AsymT;
    if (name == "asym_z") return Family::AsymZ;
    if (name == "sym") return Family::Sym;
    if (name == "sym_shifted") return Family::SymShifted;
    if (name == "rubinstein") return Family::Rubinstein;
    if (name == "all_a") return Family::AllA;
    if (name == "all_b") return Family::AllB;
    throw std::runtime_error("unknown family: '" + name + "'");
}

// Comma list of rationals, or "geom:start:factor:count".
std::vector<Rational> parse_rational_list(const std::string& spec) {
    std::vector<Rational> out;
    if (spec.rfind("geom:", 0) == 0) {
        std::stringstream ss(spec.substr(5));
        std::string start_s, factor_s, count_s;
        if (!std::getline(ss, start_s, ':') || !std::getline(ss, factor_s, ':') ||
            !std::getline(ss, count_s, ':'))
            throw std::runtime_error("geometric range needs geom:start:factor:count");
        Rational value = parse_rational(start_s);
        const Rational factor = parse_rational(factor_s);
        const int count = std::stoi(count_s);
        for (int i = 0; i < count; ++i, value *= factor) out.push_back(value);
        return out;
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_rational(item));
    return out;
}

// "1..5" or "1,2,3".
std::vector<int> parse_int_list(const std::string& spec) {
    std::vector<int> out;
    const auto dots = spec.find("..");
    if (dots != std::string::npos) {
        const int lo = std::stoi(spec.substr(0, dots));
        const int hi = std::stoi(spec.substr(dots + 2));
        for (int n = lo; n <= hi; ++n) out.push_back(n);
        return out;
    }
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    return out;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
}

std::string params_comment(const GameParams& g) {
    std::ostringstream os;
    os << "# params: p=" << format_rational(g.p) << " epsilon=" << format_rational(g.eps)
       << " psi=" << format_rational(g.psi) << " L=" << format_rational(g.L)
       << " M=" << format_rational(g.M) << " rho=" << format_rational(g.rho) << '\n';
    return os.str();
}

struct ProfileChoice {
    std::string profile_path;
    std::string family = "asym";
    std::string lead = "T";
    int n = 1;

    StrategyProfile resolve() const {
        if (!profile_path.empty()) return load_profile(profile_path);
        return family_profile(parse_family_name(family, lead), n);
    }
    void attach(CLI::App* cmd) {
        cmd->add_option("--profile", profile_path, "profile JSON file");
        cmd->add_option("--family", family, "strategy family (all-a, all-b, asym, sym, sym-shifted, rubinstein)");
        cmd->add_option("--lead", lead, "leading signal for the asym family: T or Z");
        cmd->add_option("--n", n, "threshold cutoff");
    }
};

int cmd_verify(const std::string& params_path, const ProfileChoice& choice,
               const std::string& mode_name, int depth, const std::string& out_path,
               bool decimal) {
    const GameParams g = load_params(params_path);
    const StrategyProfile prof = choice.resolve();
    const Mode mode = mode_name == "strict" ? Mode::Strict : Mode::Weak;
    VerifyOptions opt;
    opt.depth = depth;
    const auto cert = verify(g, prof, mode, opt);
    auto j = certificate_to_json(cert, g, prof);
    if (decimal) j["min_slack_decimal"] = to_decimal_string(cert.min_slack, 30);
    emit(out_path, j.dump(2) + "\n");
    return cert.verdict == Verdict::Equilibrium ? 0 : 2;
}

int cmd_sweep(const std::string& params_path, const std::string& eps_spec,
              const std::string& psi_spec, const std::string& families_spec,
              const std::string& n_spec, const std::string& mode_name,
              const std::string& out_path) {
    GameParams g = load_params(params_path);
    const auto eps_grid = parse_rational_list(eps_spec);
    const auto psi_grid = parse_rational_list(psi_spec);
    const auto n_grid = parse_int_list(n_spec);
    std::vector<std::string> family_names;
    {
        std::stringstream ss(families_spec);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) family_names.push_back(item);
    }
    if (eps_grid.empty() || psi_grid.empty() || n_grid.empty() || family_names.empty())
        throw std::runtime_error("empty sweep grid");
    const Mode mode = mode_name == "strict" ? Mode::Strict : Mode::Weak;

    std::ostringstream os;
    os << "# params: p=" << format_rational(g.p) << " L=" << format_rational(g.L)
       << " M=" << format_rational(g.M) << " rho=" << format_rational(g.rho)
       << " mode=" << to_string(mode) << '\n';
    os << "epsilon,psi,family,n,verdict,min_slack,binding_info_set\n";
    for (const auto& eps : eps_grid)
        for (const auto& psi : psi_grid)
            for (const auto& fam_name : family_names)
                for (int n : n_grid) {
                    g.eps = eps;
                    g.psi = psi;
                    const Family fam = parse_family_name(fam_name, "T");
                    const auto cert = verify(g, family_profile(fam, n), mode);
                    os << format_rational(eps) << ',' << format_rational(psi) << ','
                       << fam_name << ',' << n << ',' << to_string(cert.verdict) << ','
                       << format_rational(cert.min_slack) << ",p" << cert.binding_player
                       << ":(" << cert.binding_t << ';' << cert.binding_z << ")\n";
                }
    emit(out_path, os.str());
    return 0;
}

int cmd_welfare(const std::string& params_path, const std::string& n_spec,
                const std::string& psi_override, const std::string& family_name,
                const std::string& out_path) {
    GameParams g = load_params(params_path);
    if (!psi_override.empty()) {
        g.psi = parse_rational(psi_override);
        validate_or_throw(g);
    }
    const auto n_grid = parse_int_list(n_spec);
    if (n_grid.empty()) throw std::runtime_error("empty cutoff range");
    std::ostringstream os;
    if (family_name.empty()) {
        const auto rows = compare(g, n_grid.front(), n_grid.back());
        write_compare_csv(os, g, rows);
    } else {
        const Family fam = parse_family_name(family_name, "T");
        std::vector<WelfareReport> reports;
        for (int n : n_grid) reports.push_back(welfare_report(g, fam, n));
        write_welfare_csv(os, g, reports);
    }
    emit(out_path, os.str());
    return 0;
}

int cmd_bounds(const std::string& params_path, const std::string& out_path, bool decimal) {
    const GameParams g = load_params(params_path);
    const auto bounds = threshold_bounds(g);
    nlohmann::ordered_json j;
    j["params"] = params_to_json(g);
    j["psi1"] = format_rational(bounds.psi1);
    j["psi2"] = format_rational(bounds.psi2);
    j["psi3"] = format_rational(bounds.psi3);
    j["psibar2"] = format_rational(bounds.psibar2);
    if (decimal) {
        j["psi1_decimal"] = to_decimal_string(bounds.psi1, 30);
        j["psi2_decimal"] = to_decimal_string(bounds.psi2, 30);
        j["psi3_decimal"] = to_decimal_string(bounds.psi3, 30);
        j["psibar2_decimal"] = to_decimal_string(bounds.psibar2, 30);
    }
    emit(out_path, j.dump(2) + "\n");
    return 0;
}

int cmd_simulate(const std::string& params_path, const ProfileChoice& choice,
                 std::uint64_t samples, std::uint64_t seed, int threads, bool check,
                 const std::string& out_path) {
    SimConfig config;
    config.params = load_params(params_path);
    config.profile = choice.resolve();
    config.samples = samples;
    config.seed = seed;
    config.threads = threads;
    const auto result = simulate(config);
    auto j = sim_result_to_json(config, result);
    if (check) {
        const auto report = convergence_check(config, result);
        auto checks = nlohmann::ordered_json::array();
        for (const auto& item : report.items) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6g", item.z_abs());
            checks.push_back({{"statistic", item.name},
                              {"z", std::string(buf)},
                              {"pass", item.pass}});
        }
        j["convergence"] = {{"pass", report.pass}, {"checks", std::move(checks)}};
    }
    emit(out_path, j.dump(2) + "\n");
    return 0;
}

int cmd_dump(const std::string& params_path, int depth, bool signals,
             const std::string& out_path) {
    const GameParams g = load_params(params_path);
    const auto dist = signals ? enumerate_with_signals(g, depth) : enumerate_outcomes(g, depth);
    std::ostringstream os;
    os << params_comment(g);
    write_atoms_csv(os, dist);
    emit(out_path, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact equilibrium toolkit for the two-player mail game with secondary signals"};
    app.require_subcommand(1);

    std::string params_path, out_path, mode_name = "weak";
    bool decimal = false;

    auto* verify_cmd = app.add_subcommand("verify", "verify or refute a strategy profile");
    ProfileChoice verify_choice;
    int verify_depth = 0;
    verify_cmd->add_option("--params", params_path, "params JSON file")->required();
    verify_choice.attach(verify_cmd);
    verify_cmd->add_option("--mode", mode_name, "weak or strict");
    verify_cmd->add_option("--depth", verify_depth, "enumeration depth (0 = auto)");
    verify_cmd->add_option("--out", out_path, "output path (default stdout)");
    verify_cmd->add_flag("--decimal", decimal, "add 30-digit decimal renditions");

    auto* sweep_cmd = app.add_subcommand("sweep", "verify families over an (epsilon, psi) grid");
    std::string eps_spec, psi_spec, families_spec = "asym_t,asym_z,sym", n_spec = "1..3";
    sweep_cmd->add_option("--params", params_path, "params JSON file")->required();
    sweep_cmd->add_option("--eps", eps_spec, "epsilon grid: comma list or geom:start:factor:count")
        ->required();
    sweep_cmd->add_option("--psi", psi_spec, "psi grid: comma list or geom:start:factor:count")
        ->required();
    sweep_cmd->add_option("--families", families_spec, "comma list of families");
    sweep_cmd->add_option("--n", n_spec, "cutoffs: list or lo..hi");
    sweep_cmd->add_option("--mode", mode_name, "weak or strict");
    sweep_cmd->add_option("--out", out_path, "output path (default stdout)");

    auto* welfare_cmd = app.add_subcommand("welfare", "exact welfare-loss tables");
    std::string welfare_n = "1..5", welfare_psi, welfare_family;
    welfare_cmd->add_option("--params", params_path, "params JSON file")->required();
    welfare_cmd->add_option("--n", welfare_n, "cutoffs: list or lo..hi");
    welfare_cmd->add_option("--psi", welfare_psi, "override psi from the params file");
    welfare_cmd->add_option("--family", welfare_family,
                            "detailed per-family table instead of the asym/sym comparison");
    welfare_cmd->add_option("--out", out_path, "output path (default stdout)");

    auto* bounds_cmd = app.add_subcommand("bounds", "closed-form noise thresholds");
    bounds_cmd->add_option("--params", params_path, "params JSON file")->required();
    bounds_cmd->add_option("--out", out_path, "output path (default stdout)");
    bounds_cmd->add_flag("--decimal", decimal, "add 30-digit decimal renditions");

    auto* sim_cmd = app.add_subcommand("simulate", "seeded Monte Carlo simulation");
    ProfileChoice sim_choice;
    std::uint64_t samples = 1'000'000, seed = 0;
    int threads = 1;
    bool sim_check = false;
    sim_cmd->add_option("--params", params_path, "params JSON file")->required();
    sim_choice.attach(sim_cmd);
    sim_cmd->add_option("--samples", samples, "number of samples");
    sim_cmd->add_option("--seed", seed, "master seed")->required();
    sim_cmd->add_option("--threads", threads, "worker threads");
    sim_cmd->add_flag("--check", sim_check, "compare against exact enumeration (4 sigma)");
    sim_cmd->add_option("--out", out_path, "output path (default stdout)");

    auto* dump_cmd = app.add_subcommand("dump", "dump the enumerated atom distribution as CSV");
    int dump_depth = 8;
    bool no_signals = false;
    dump_cmd->add_option("--params", params_path, "params JSON file")->required();
    dump_cmd->add_option("--depth", dump_depth, "truncation depth");
    dump_cmd->add_flag("--no-signals", no_signals, "omit the secondary-signal split");
    dump_cmd->add_option("--out", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (verify_cmd->parsed())
            return cmd_verify(params_path, verify_choice, mode_name, verify_depth, out_path,
                              decimal);
        if (sweep_cmd->parsed())
            return cmd_sweep(params_path, eps_spec, psi_spec, families_spec, n_spec, mode_name,
                             out_path);
        if (welfare_cmd->parsed())
            return cmd_welfare(params_path, welfare_n, welfare_psi, welfare_family, out_path);
        if (bounds_cmd->parsed()) return cmd_bounds(params_path, out_path, decimal);
        if (sim_cmd->parsed())
            return cmd_simulate(params_path, sim_choice, samples, seed, threads, sim_check,
                                out_path);
        if (dump_cmd->parsed()) return cmd_dump(params_path, dump_depth, !no_signals, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
