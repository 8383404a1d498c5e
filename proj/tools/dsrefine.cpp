// Command-line front end: validation, driving-variable transformation,
// relation checking, well-posedness checks, refinement, simulation, and the
// built-in end-to-end verification. Reports go to stdout as JSON; errors go
// to stderr. Exit codes: 0 success or verdict true, 1 verdict false or a
// failed check, 2 usage or parse problem, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dsrefine/jsonio.hpp"
#include "dsrefine/selftest.hpp"
#include "dsrefine/simulate.hpp"

namespace {

using dsrefine::Controller;
using dsrefine::DescriptorSystem;
using dsrefine::LinearStateMap;
using dsrefine::Tolerance;
using dsrefine::Trajectory;
using dsrefine::Vector;
using dsrefine::jsonio::json;

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (long i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Vector parse_state_arg(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || tok.empty())
            throw dsrefine::DimensionMismatch("--x0: cannot parse '" + tok + "' as a decimal");
        vals.push_back(value);
    }
    if (vals.empty()) throw dsrefine::DimensionMismatch("--x0: no coordinates given");
    Vector v(static_cast<long>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<long>(i)) = vals[i];
    return v;
}

/// Initial states from a JSON file: either a bare array of state rows or an
/// object with a "points" field (the points initial-set layout).
std::vector<Vector> load_states_file(const std::string& path) {
    const json doc = dsrefine::jsonio::load_file(path);
    const json& arr = doc.is_array() ? doc
                                     : dsrefine::jsonio::require_field(doc, path, "points");
    const dsrefine::Matrix m = dsrefine::jsonio::matrix_from_json(arr, path, "points");
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(m.rows()));
    for (long i = 0; i < m.rows(); ++i) out.push_back(m.row(i).transpose());
    return out;
}

/// Insert a run index before the extension for batch CSV export.
std::string indexed_path(const std::string& path, std::size_t index, std::size_t total) {
    if (total <= 1) return path;
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "_" + std::to_string(index);
    return path.substr(0, dot) + "_" + std::to_string(index) + path.substr(dot);
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

/// A zero-row controller file carries no column information; shape it to
/// the plant so the rank checks can run.
Controller load_controller_for(const std::string& path, const DescriptorSystem& sys) {
    Controller ctrl = dsrefine::load_controller(path);
    if (ctrl.rows() == 0)
        return Controller(dsrefine::Matrix(0, sys.n()), dsrefine::Matrix(0, sys.n()),
                          dsrefine::Matrix(0, sys.p()));
    return ctrl;
}

int cmd_validate(const std::string& path, const Tolerance& tol) {
    const DescriptorSystem sys = dsrefine::load_system(path);
    const auto rep = dsrefine::validate(sys, tol);
    json j;
    j["command"] = "validate";
    j["system"] = path;
    j["state_dim"] = sys.n();
    j["input_dim"] = sys.p();
    j["output_dim"] = sys.k();
    j["rank_B_ok"] = rep.rank_B_ok;
    j["rank_C_ok"] = rep.rank_C_ok;
    j["assumption1_ok"] = rep.assumption1_ok;
    j["all_ok"] = rep.all_ok();
    j["messages"] = rep.messages;
    emit(j);
    return rep.all_ok() ? 0 : 1;
}

int cmd_to_dv(const std::string& in, const std::string& out, const Tolerance& tol) {
    const DescriptorSystem sys = dsrefine::load_system(in);
    const auto dv = dsrefine::to_dv(sys, tol);
    dsrefine::save_dv(dv, out);
    json j;
    j["command"] = "to-dv";
    j["system"] = in;
    j["out"] = out;
    j["state_dim"] = dv.n();
    j["driving_dim"] = dv.ps();
    j["input_dim"] = dv.p();
    j["output_dim"] = dv.k();
    j["consistent"] = dsrefine::check_dv_consistency(sys, dv, tol);
    emit(j);
    return 0;
}

int cmd_check_sim(const std::string& abs_path, const std::string& conc_path,
                  const std::string& rel_path, const Tolerance& tol) {
    const DescriptorSystem abs = dsrefine::load_system(abs_path);
    const DescriptorSystem conc = dsrefine::load_system(conc_path);
    const LinearStateMap rel = dsrefine::load_relation(rel_path);
    const auto rep = dsrefine::check_simulation(abs, conc, rel, tol);
    json j;
    j["command"] = "check-sim";
    j["abstract"] = abs_path;
    j["concrete"] = conc_path;
    j["relation"] = rel_path;
    j["output_match"] = rep.output_match;
    j["step_match"] = rep.step_match;
    j["initial_cover"] = rep.initial_cover;
    j["verdict"] = rep.verdict;
    j["drift"] = dsrefine::jsonio::matrix_to_json(rep.drift);
    emit(j);
    return rep.verdict ? 0 : 1;
}

int cmd_check_wellposed(const std::string& sys_path, const std::string& ctrl_path,
                        const Tolerance& tol) {
    const DescriptorSystem sys = dsrefine::load_system(sys_path);
    const Controller ctrl = load_controller_for(ctrl_path, sys);
    const auto rep = dsrefine::check_wellposed(sys, ctrl, tol);
    json j;
    j["command"] = "check-wellposed";
    j["system"] = sys_path;
    j["controller"] = ctrl_path;
    j["rank_lhs"] = rep.rank_lhs;
    j["rank_aug"] = rep.rank_aug;
    j["state_plus_input"] = sys.n() + sys.p();
    j["existence_ok"] = rep.existence_ok;
    j["uniqueness_ok"] = rep.uniqueness_ok;
    j["verdict"] = rep.verdict;
    emit(j);
    return rep.verdict ? 0 : 1;
}

int cmd_refine(const std::string& conc_path, const std::string& abs_path,
               const std::string& rel_path, const std::string& ctrl_path,
               const std::string& out, const Tolerance& tol) {
    const DescriptorSystem conc = dsrefine::load_system(conc_path);
    const DescriptorSystem abs = dsrefine::load_system(abs_path);
    const LinearStateMap rel = dsrefine::load_relation(rel_path);
    const Controller ctrl_a = load_controller_for(ctrl_path, abs);
    const auto rc = dsrefine::refine_end_to_end(conc, abs, rel, ctrl_a, tol);
    dsrefine::save_refined(rc, out);
    json j;
    j["command"] = "refine";
    j["concrete"] = conc_path;
    j["abstract"] = abs_path;
    j["relation"] = rel_path;
    j["controller"] = ctrl_path;
    j["out"] = out;
    j["z_dim"] = rc.z_dim();
    j["driving_dim"] = static_cast<int>(rc.Bd.cols());
    j["abstract_driving_dim"] = static_cast<int>(rc.interface.Bda.cols());
    emit(j);
    return 0;
}

int cmd_simulate(const std::string& sys_path, const std::string& ctrl_path,
                 const std::string& x0_arg, const std::string& x0_file, int steps,
                 const std::string& csv, const Tolerance& tol) {
    if (x0_arg.empty() == x0_file.empty())
        throw dsrefine::DimensionMismatch("simulate needs exactly one of --x0 and --x0-file");
    const DescriptorSystem sys = dsrefine::load_system(sys_path);
    const bool use_refined = dsrefine::jsonio::load_file(ctrl_path).contains("Kz");
    std::vector<Vector> starts =
        x0_file.empty() ? std::vector<Vector>{parse_state_arg(x0_arg)} : load_states_file(x0_file);

    json runs = json::array();
    for (std::size_t i = 0; i < starts.size(); ++i) {
        Trajectory traj;
        if (use_refined) {
            const auto rc = dsrefine::load_refined(ctrl_path);
            traj = dsrefine::simulate_refined(sys, rc, starts[i], steps, tol).first;
        } else {
            const auto ctrl = load_controller_for(ctrl_path, sys);
            traj = dsrefine::simulate_closed_loop(sys, ctrl, starts[i], steps, tol);
        }
        json run;
        run["x0"] = vector_to_json(starts[i]);
        run["final_state"] = vector_to_json(traj.x.back());
        run["final_output"] = vector_to_json(traj.y.back());
        if (!csv.empty()) {
            const std::string path = indexed_path(csv, i, starts.size());
            dsrefine::save_trajectory_csv(traj, path);
            run["csv"] = path;
        }
        runs.push_back(run);
    }
    json j;
    j["command"] = "simulate";
    j["system"] = sys_path;
    j["controller"] = ctrl_path;
    j["controller_kind"] = use_refined ? "refined" : "controller";
    j["steps"] = steps;
    j["runs"] = runs;
    emit(j);
    return 0;
}

int cmd_verify_example4(const Tolerance& tol, unsigned seed, double bound) {
    const auto checks = dsrefine::selftest::run_all(tol, seed, bound);
    json report;
    report["command"] = "verify-example4";
    report["seed"] = seed;
    report["bound"] = bound;
    json lines = json::object();
    bool all_pass = true;
    for (const auto& check : checks) {
        char metric[32];
        std::snprintf(metric, sizeof metric, "%.3e", check.metric);
        lines[check.name] = std::string(check.pass ? "PASS" : "FAIL") + " (metric " + metric +
                            "; " + check.detail + ")";
        all_pass = all_pass && check.pass;
    }
    report["checks"] = lines;
    report["all_pass"] = all_pass;
    emit(report);
    return all_pass ? 0 : 1;
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const dsrefine::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const dsrefine::UnsupportedCombination& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return 2;
    } catch (const dsrefine::DimensionMismatch& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const dsrefine::NoSolution& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const dsrefine::NonUnique& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const dsrefine::Infeasible& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const dsrefine::RankDeficient& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const dsrefine::Error& e) {
        // Assumption or well-posedness violations, rejected relations, bad
        // initial states: the check failed.
        std::cerr << "check failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact control refinement for discrete-time linear descriptor systems"};
    app.require_subcommand(1);

    Tolerance tol;
    app.add_option("--tol-rank", tol.rank_rtol,
                   "Relative singular-value cutoff for rank decisions")
        ->capture_default_str();
    app.add_option("--tol-residual", tol.residual_atol, "Absolute residual tolerance")
        ->capture_default_str();

    std::string validate_sys;
    auto* validate = app.add_subcommand("validate", "Check the standing assumptions on a system");
    validate->add_option("system", validate_sys, "System JSON file")->required();

    std::string todv_sys, todv_out;
    auto* todv = app.add_subcommand("to-dv", "Write the driving-variable form of a system");
    todv->add_option("system", todv_sys, "System JSON file")->required();
    todv->add_option("out", todv_out, "Output DV JSON file")->required();

    std::string sim_abs, sim_conc, sim_rel;
    auto* checksim = app.add_subcommand("check-sim", "Decide whether H is a simulation relation");
    checksim->add_option("abstract", sim_abs, "Abstract system JSON file")->required();
    checksim->add_option("concrete", sim_conc, "Concrete system JSON file")->required();
    checksim->add_option("relation", sim_rel, "Relation JSON file")->required();

    std::string wp_sys, wp_ctrl;
    auto* checkwp = app.add_subcommand("check-wellposed",
                                       "Rank conditions for a plant/controller pair");
    checkwp->add_option("system", wp_sys, "System JSON file")->required();
    checkwp->add_option("controller", wp_ctrl, "Controller JSON file")->required();

    std::string ref_conc, ref_abs, ref_rel, ref_ctrl, ref_out;
    auto* refine = app.add_subcommand("refine", "Refine an abstract controller to the concrete system");
    refine->add_option("concrete", ref_conc, "Concrete system JSON file")->required();
    refine->add_option("abstract", ref_abs, "Abstract system JSON file")->required();
    refine->add_option("relation", ref_rel, "Relation JSON file")->required();
    refine->add_option("controller", ref_ctrl, "Abstract controller JSON file")->required();
    refine->add_option("out", ref_out, "Output refined-controller JSON file")->required();

    std::string run_sys, run_ctrl, run_x0, run_x0_file, run_csv;
    int run_steps = 100;
    auto* simulate = app.add_subcommand("simulate", "Roll out a closed loop");
    simulate->add_option("system", run_sys, "System JSON file")->required();
    simulate->add_option("controller", run_ctrl,
                         "Controller or refined-controller JSON file")
        ->required();
    simulate->add_option("--x0", run_x0, "Initial state as comma-separated decimals");
    simulate->add_option("--x0-file", run_x0_file, "JSON file with one initial state per row");
    simulate->add_option("--steps", run_steps, "Horizon")->capture_default_str();
    simulate->add_option("--csv", run_csv, "Trajectory CSV output path");

    unsigned verify_seed = 0;
    double verify_bound = 1e-8;
    auto* verify = app.add_subcommand("verify-example4",
                                      "Run the built-in reference example end to end");
    verify->add_option("--seed", verify_seed, "Seed for the randomized checks")
        ->capture_default_str();
    verify->add_option("--bound", verify_bound, "Trajectory comparison bound")
        ->capture_default_str();

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (validate->parsed()) return run_guarded([&] { return cmd_validate(validate_sys, tol); });
    if (todv->parsed()) return run_guarded([&] { return cmd_to_dv(todv_sys, todv_out, tol); });
    if (checksim->parsed())
        return run_guarded([&] { return cmd_check_sim(sim_abs, sim_conc, sim_rel, tol); });
    if (checkwp->parsed())
        return run_guarded([&] { return cmd_check_wellposed(wp_sys, wp_ctrl, tol); });
    if (refine->parsed())
        return run_guarded(
            [&] { return cmd_refine(ref_conc, ref_abs, ref_rel, ref_ctrl, ref_out, tol); });
    if (simulate->parsed())
        return run_guarded([&] {
            return cmd_simulate(run_sys, run_ctrl, run_x0, run_x0_file, run_steps, run_csv, tol);
        });
    if (verify->parsed())
        return run_guarded([&] { return cmd_verify_example4(tol, verify_seed, verify_bound); });
    return 2;
}
