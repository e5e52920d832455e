#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hankelid/identify.hpp"
#include "hankelid/informativity.hpp"
#include "hankelid/invariants.hpp"
#include "hankelid/system.hpp"
#include "hankelid/trajectory.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitIo = 2;
constexpr int kExitUsage = 64;

using nlohmann::json;

hankelid::Tolerance tolerance_from_env() {
    hankelid::Tolerance tol;
    if (const char* env = std::getenv("HANKELID_TOL")) {
        try {
            tol.rank_rel = std::stod(env);
        } catch (const std::exception&) {
            throw CLI::ValidationError("HANKELID_TOL", "not a number");
        }
    }
    return tol;
}

hankelid::IOTrajectory load_with_prefix(const std::string& path, long prefix) {
    hankelid::IOTrajectory traj =
        hankelid::load_trajectory(path, hankelid::format_from_path(path));
    if (prefix < 0) return traj;
    return hankelid::prefix(traj, prefix);
}

json invariants_json(const hankelid::DataInvariants& inv) {
    json j;
    j["delta"] = inv.delta;  // delta_{-1} .. delta_q
    j["q"] = inv.q;
    j["l_min"] = inv.l_min;
    j["n_min"] = inv.n_min;
    return j;
}

std::vector<double> parse_csv_vector(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) values.push_back(std::stod(item));
    return values;
}

int cmd_invariants(const std::string& data, long prefix, bool as_json) {
    const hankelid::Tolerance tol = tolerance_from_env();
    const hankelid::IOTrajectory traj = load_with_prefix(data, prefix);
    const hankelid::DataInvariants inv = hankelid::invariants(traj, tol);
    if (as_json) {
        std::cout << invariants_json(inv).dump(2) << "\n";
    } else {
        std::cout << "T=" << traj.T() << "  delta(-1.." << inv.q << ") =";
        for (auto d : inv.delta) std::cout << " " << d;
        std::cout << "  l_min=" << inv.l_min << "  n_min=" << inv.n_min << "\n";
    }
    return kExitOk;
}

int cmd_identify(const std::string& data, long prefix, bool as_json) {
    const hankelid::Tolerance tol = tolerance_from_env();
    const hankelid::IOTrajectory traj = load_with_prefix(data, prefix);
    const hankelid::IdentificationResult result = hankelid::identify_minimal(traj, tol);
    if (as_json) {
        json j = json::parse(hankelid::system_to_json(result.system));
        j["residual"] = result.residual;
        j["invariants"] = invariants_json(result.invariants);
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "n=" << result.system.n() << " lag=" << result.invariants.l_min
                  << " residual=" << result.residual << "\n"
                  << hankelid::system_to_json(result.system) << "\n";
    }
    return kExitOk;
}

int cmd_check(const std::string& data, long prefix, const hankelid::PriorBounds& bounds,
              const std::string& method, bool as_json) {
    const hankelid::Tolerance tol = tolerance_from_env();
    const hankelid::IOTrajectory traj = load_with_prefix(data, prefix);
    bool positive = false;
    json j;
    if (method == "main") {
        const hankelid::InformativityVerdict v = hankelid::check_main(traj, bounds, tol);
        positive = v.informative;
        j = {{"method", "main"},
             {"informative", v.informative},
             {"lag_lb", v.lag_lb},
             {"state_lb", v.state_lb},
             {"length", v.length},
             {"rank_cond", v.rank_cond},
             {"L_d", v.L_d},
             {"L_a", v.L_a},
             {"invariants", invariants_json(v.invariants)}};
        if (v.informative) {
            j["true_lag"] = v.predicted_true_lag;
            j["true_dim"] = v.predicted_true_dim;
        }
    } else if (method == "pe") {
        const hankelid::PELemmaVerdict v = hankelid::check_fundamental_lemma(traj, bounds, tol);
        positive = v.concluded_informative;
        j = {{"method", "pe"},
             {"applicable", v.applicable},
             {"length_ok", v.length_ok},
             {"pe_ok", v.pe_ok},
             {"informative", v.concluded_informative}};
    } else {  // fixed: --lplus/--nplus carry the exact lag and dimension
        positive = hankelid::check_fixed_order(traj, bounds.L_plus, bounds.N_plus, tol);
        j = {{"method", "fixed"}, {"informative", positive}};
    }
    if (as_json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "T=" << traj.T() << " method=" << method
                  << " informative=" << (positive ? "yes" : "no") << "\n";
    }
    return positive ? kExitOk : kExitNegative;
}

int cmd_simulate(const std::string& system_path, const std::string& input_path,
                 const std::string& x0_csv, const std::string& output) {
    const hankelid::IsoSystem sys = hankelid::load_system(system_path);
    const hankelid::IOTrajectory input =
        hankelid::load_trajectory(input_path, hankelid::format_from_path(input_path));
    const std::vector<double> x0_values = parse_csv_vector(x0_csv);
    if (static_cast<hankelid::Mat::Index>(x0_values.size()) != sys.n()) {
        throw hankelid::InvalidShape("simulate: x0 length does not match state dimension");
    }
    hankelid::Vec x0(sys.n());
    for (Eigen::Index i = 0; i < sys.n(); ++i) x0(i) = x0_values[i];
    const hankelid::SimulationResult sim = hankelid::simulate(sys, x0, input.u());
    const hankelid::IOTrajectory out(input.u(), sim.y);
    if (output.empty()) {
        json j;
        j["m"] = out.m();
        j["p"] = out.p();
        j["T"] = out.T();
        j["y"] = json::array();
        for (Eigen::Index r = 0; r < out.p(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < out.T(); ++c) row.push_back(out.y()(r, c));
            j["y"].push_back(row);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        hankelid::save_trajectory(out, output, hankelid::format_from_path(output));
    }
    return kExitOk;
}

int cmd_isomorphic(const std::string& path1, const std::string& path2, bool as_json) {
    const hankelid::Tolerance tol = tolerance_from_env();
    const hankelid::IsoSystem s1 = hankelid::load_system(path1);
    const hankelid::IsoSystem s2 = hankelid::load_system(path2);
    const hankelid::IsomorphismResult result = hankelid::is_isomorphic(s1, s2, tol);
    json j;
    j["isomorphic"] = result.isomorphic;
    if (result.S) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < result.S->rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < result.S->cols(); ++c) {
                row.push_back((*result.S)(r, c));
            }
            rows.push_back(row);
        }
        j["S"] = rows;
    }
    if (as_json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "isomorphic=" << (result.isomorphic ? "yes" : "no") << "\n";
    }
    return result.isomorphic ? kExitOk : kExitNegative;
}

int cmd_harness(int trials, std::uint64_t seed, const hankelid::HarnessCaps& caps) {
    const hankelid::Tolerance tol = tolerance_from_env();
    const hankelid::HarnessReport report = hankelid::harness(trials, caps, seed, tol);
    std::cout << report.to_json() << "\n";
    return report.clean() ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact identification of minimal linear systems from finite "
                 "input-output records"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "Emit JSON instead of text");

    std::string data;
    long prefix = -1;

    auto* inv_cmd = app.add_subcommand("invariants", "Print the data invariants");
    inv_cmd->add_option("--data", data, "Trajectory file (CSV or JSON)")->required();
    inv_cmd->add_option("--prefix", prefix, "Use only the first T samples")
        ->check(CLI::PositiveNumber);

    auto* id_cmd = app.add_subcommand("identify", "Identify a minimal explaining system");
    id_cmd->add_option("--data", data, "Trajectory file (CSV or JSON)")->required();
    id_cmd->add_option("--prefix", prefix, "Use only the first T samples")
        ->check(CLI::PositiveNumber);

    hankelid::PriorBounds bounds;
    std::string method = "main";
    auto* check_cmd = app.add_subcommand("check", "Test the data for informativity");
    check_cmd->add_option("--data", data, "Trajectory file (CSV or JSON)")->required();
    check_cmd->add_option("--prefix", prefix, "Use only the first T samples")
        ->check(CLI::PositiveNumber);
    check_cmd->add_option("--lminus", bounds.L_minus, "Lower bound on the lag");
    check_cmd->add_option("--lplus", bounds.L_plus, "Upper bound on the lag")->required();
    check_cmd->add_option("--nminus", bounds.N_minus, "Lower bound on the state dimension");
    check_cmd->add_option("--nplus", bounds.N_plus, "Upper bound on the state dimension")
        ->required();
    check_cmd->add_option("--method", method, "main | pe | fixed")
        ->check(CLI::IsMember({"main", "pe", "fixed"}));

    std::string system_path, input_path, x0_csv, output;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a system on an input record");
    sim_cmd->add_option("--system", system_path, "System file (JSON)")->required();
    sim_cmd->add_option("--input", input_path, "Trajectory file providing the input")
        ->required();
    sim_cmd->add_option("--x0", x0_csv, "Initial state, comma separated")->required();
    sim_cmd->add_option("--output", output, "Write the resulting trajectory here");

    std::string sys1, sys2;
    auto* iso_cmd = app.add_subcommand("isomorphic", "Compare two observable systems");
    iso_cmd->add_option("--sys1", sys1, "First system file")->required();
    iso_cmd->add_option("--sys2", sys2, "Second system file")->required();

    int trials = 200;
    std::uint64_t seed = 1;
    hankelid::HarnessCaps caps;
    auto* har_cmd = app.add_subcommand("harness", "Run the randomized property suite");
    har_cmd->add_option("--trials", trials, "Number of trials")->check(CLI::NonNegativeNumber);
    har_cmd->add_option("--seed", seed, "Base seed");
    har_cmd->add_option("--max-n", caps.max_n, "State dimension cap");
    har_cmd->add_option("--max-m", caps.max_m, "Input count cap");
    har_cmd->add_option("--max-p", caps.max_p, "Output count cap");
    har_cmd->add_option("--max-T", caps.max_T, "Record length cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*inv_cmd) return cmd_invariants(data, prefix, as_json);
        if (*id_cmd) return cmd_identify(data, prefix, as_json);
        if (*check_cmd) {
            if (!bounds.valid()) {
                std::cerr << "error: prior bounds must satisfy "
                             "0 <= lminus <= lplus <= nplus and lminus <= nminus <= nplus\n";
                return kExitUsage;
            }
            return cmd_check(data, prefix, bounds, method, as_json);
        }
        if (*sim_cmd) return cmd_simulate(system_path, input_path, x0_csv, output);
        if (*iso_cmd) return cmd_isomorphic(sys1, sys2, as_json);
        if (*har_cmd) return cmd_harness(trials, seed, caps);
    } catch (const hankelid::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
