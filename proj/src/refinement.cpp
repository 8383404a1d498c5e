#include "dsrefine/refinement.hpp"

#include "dsrefine/jsonio.hpp"
#include "dsrefine/simulate.hpp"

namespace dsrefine {

ClosedLoopLinear closed_loop_reduce(const DescriptorSystem& abs, const Controller& ctrl,
                                    const Tolerance& tol) {
    const WellPosednessReport wp = check_wellposed(abs, ctrl, tol);
    if (!wp.existence_ok)
        throw NotWellPosed(WellPosednessFailure::existence,
                           "closed_loop_reduce: some state has no continuation (rank " +
                               std::to_string(wp.rank_lhs) + " vs augmented " +
                               std::to_string(wp.rank_aug) + ")");
    if (!wp.uniqueness_ok)
        throw NotWellPosed(WellPosednessFailure::uniqueness,
                           "closed_loop_reduce: continuations are not unique (rank " +
                               std::to_string(wp.rank_aug) + " < " +
                               std::to_string(abs.n() + abs.p()) + ")");
    using numkit::hcat;
    using numkit::vcat;
    const Matrix lhs = vcat(hcat(abs.E, -abs.B), hcat(ctrl.Ec, -ctrl.Bc));
    const Matrix rhs = vcat(abs.A, ctrl.Ac);
    const auto solved = numkit::min_norm_solve(lhs, rhs, tol);
    if (!solved.feasible)
        throw NotWellPosed(WellPosednessFailure::existence,
                           "closed_loop_reduce: stacked solve left a residual");
    ClosedLoopLinear cl;
    cl.K = solved.solution.topRows(abs.n());
    cl.L = solved.solution.bottomRows(abs.p());
    return cl;
}

Matrix abstract_s_schedule(const DrivingVariableSystem& abs_dv, const ClosedLoopLinear& cl,
                           const Tolerance&) {
    if (cl.K.rows() != abs_dv.n() || cl.K.cols() != abs_dv.n() || cl.L.rows() != abs_dv.p())
        throw DimensionMismatch("abstract_s_schedule: closed loop does not match the "
                                "driving-variable form");
    const Matrix stacked = numkit::vcat(cl.K, cl.L);
    return abs_dv.kernel_basis().transpose() * (stacked - abs_dv.particular_map());
}

RefinedController refine_end_to_end(const DescriptorSystem& conc, const DescriptorSystem& abs,
                                    const LinearStateMap& rel, const Controller& ctrl_a,
                                    const Tolerance& tol) {
    const SimulationReport sim = check_simulation(abs, conc, rel, tol);
    if (!sim.verdict) {
        std::string why = "refine_end_to_end: relation rejected:";
        if (!sim.output_match) why += " outputs disagree through H;";
        if (!sim.step_match) why += " abstract steps are unmatched;";
        if (!sim.initial_cover) why += " initial states are not covered;";
        throw RelationRejected(why);
    }
    const ClosedLoopLinear cl = closed_loop_reduce(abs, ctrl_a, tol);
    const DrivingVariableSystem abs_dv = to_dv(abs, tol);
    const DrivingVariableSystem conc_dv = to_dv(conc, tol);

    RefinedController rc;
    rc.Kz = cl.K;
    rc.P = abstract_s_schedule(abs_dv, cl, tol);
    rc.interface = synthesize_interface(abs_dv, conc_dv, rel, tol);
    rc.Ad = conc_dv.Ad;
    rc.Bd = conc_dv.Bd;
    rc.Cu = conc_dv.Cu;
    rc.Du = conc_dv.Du;
    rc.H = rel;

    // Interconnection certificates. The lifting rows must pin the successor:
    // [E; Bd^T] full column rank, and the full stacked step map must pin
    // (x+, u): [[E -B]; [Bd^T 0]; [0 I]] full column rank.
    using numkit::hcat;
    using numkit::vcat;
    const int n = conc.n();
    const int p = conc.p();
    if (numkit::rank_of(vcat(conc.E, rc.lift_left()), tol) < n)
        throw NotWellPosed(WellPosednessFailure::uniqueness,
                           "refine_end_to_end: lifting rows do not pin the successor state");
    const Matrix composed =
        vcat(vcat(hcat(conc.E, -conc.B), hcat(rc.lift_left(), Matrix::Zero(rc.Bd.cols(), p))),
             hcat(Matrix::Zero(p, n), Matrix::Identity(p, p)));
    if (numkit::rank_of(composed, tol) < n + p)
        throw NotWellPosed(WellPosednessFailure::uniqueness,
                           "refine_end_to_end: composed step map is column-rank deficient");
    // Existence: the driving-variable law solves the descriptor equation.
    if (numkit::inf_norm(conc.E * rc.Ad - conc.B * rc.Cu - conc.A) > tol.residual_atol ||
        numkit::inf_norm(conc.E * rc.Bd - conc.B * rc.Du) > tol.residual_atol)
        throw NotWellPosed(WellPosednessFailure::existence,
                           "refine_end_to_end: driving-variable law violates the plant "
                           "equation");
    return rc;
}

RefinedController load_refined(const std::string& path) {
    namespace jio = jsonio;
    const jio::json j = jio::load_file(path);
    RefinedController rc;
    rc.Kz = jio::matrix_from_json(jio::require_field(j, path, "Kz"), path, "Kz");
    rc.P = jio::matrix_from_json(jio::require_field(j, path, "P"), path, "P",
                                 static_cast<int>(rc.Kz.cols()));
    rc.interface.G = jio::matrix_from_json(jio::require_field(j, path, "G"), path, "G");
    rc.interface.drift =
        jio::matrix_from_json(jio::require_field(j, path, "drift"), path, "drift");
    rc.interface.Bda = jio::matrix_from_json(jio::require_field(j, path, "Bda"), path, "Bda");
    rc.Ad = jio::matrix_from_json(jio::require_field(j, path, "Ad"), path, "Ad");
    rc.Bd = jio::matrix_from_json(jio::require_field(j, path, "Bd"), path, "Bd",
                                  static_cast<int>(rc.interface.G.cols()));
    rc.Cu = jio::matrix_from_json(jio::require_field(j, path, "Cu"), path, "Cu",
                                  static_cast<int>(rc.Ad.cols()));
    rc.Du = jio::matrix_from_json(jio::require_field(j, path, "Du"), path, "Du",
                                  static_cast<int>(rc.Bd.cols()));
    rc.H = LinearStateMap{jio::matrix_from_json(jio::require_field(j, path, "H"), path, "H")};
    return rc;
}

void save_refined(const RefinedController& rc, const std::string& path) {
    namespace jio = jsonio;
    jio::json j;
    j["Kz"] = jio::matrix_to_json(rc.Kz);
    j["P"] = jio::matrix_to_json(rc.P);
    j["G"] = jio::matrix_to_json(rc.interface.G);
    j["drift"] = jio::matrix_to_json(rc.interface.drift);
    j["Bda"] = jio::matrix_to_json(rc.interface.Bda);
    j["Bd"] = jio::matrix_to_json(rc.Bd);
    j["Ad"] = jio::matrix_to_json(rc.Ad);
    j["Cu"] = jio::matrix_to_json(rc.Cu);
    j["Du"] = jio::matrix_to_json(rc.Du);
    j["H"] = jio::matrix_to_json(rc.H.H);
    jio::write_file(j, path);
}

}  // namespace dsrefine
