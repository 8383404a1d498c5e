#include "dsrefine/simulate.hpp"

#include <Eigen/QR>

namespace dsrefine {

namespace {

constexpr long kHorizonCap = 10000;

void check_horizon(int T) {
    if (T < 0 || T > kHorizonCap)
        throw DimensionMismatch("horizon must lie in [0, " + std::to_string(kHorizonCap) + "]");
}

}  // namespace

WellPosednessReport check_wellposed(const DescriptorSystem& sys, const Controller& ctrl,
                                    const Tolerance& tol) {
    if (ctrl.Ac.cols() != sys.n() || ctrl.Ec.cols() != sys.n() || ctrl.Bc.cols() != sys.p())
        throw DimensionMismatch("check_wellposed: controller is shaped for state dimension " +
                                std::to_string(ctrl.Ec.cols()) + ", input dimension " +
                                std::to_string(ctrl.Bc.cols()));
    using numkit::hcat;
    using numkit::vcat;
    const Matrix lhs = vcat(hcat(sys.E, sys.B), hcat(ctrl.Ec, ctrl.Bc));
    const Matrix aug = hcat(lhs, vcat(sys.A, ctrl.Ac));
    WellPosednessReport rep;
    rep.rank_lhs = numkit::rank_of(lhs, tol);
    rep.rank_aug = numkit::rank_of(aug, tol);
    rep.existence_ok = rep.rank_lhs == rep.rank_aug;
    rep.uniqueness_ok = rep.rank_aug == sys.n() + sys.p();
    rep.verdict = rep.existence_ok && rep.uniqueness_ok;
    return rep;
}

std::pair<Vector, Vector> step_implicit(const Matrix& lhs, const Vector& rhs, int state_dim,
                                        const Tolerance& tol) {
    if (lhs.rows() != rhs.size() || state_dim < 0 || state_dim > lhs.cols())
        throw DimensionMismatch("step_implicit: incompatible stacked system");
    if (numkit::rank_of(lhs, tol) < lhs.cols())
        throw NonUnique("step_implicit: stacked matrix is column-rank deficient");
    const Vector sol = lhs.colPivHouseholderQr().solve(rhs);
    const double residual = numkit::inf_norm(lhs * sol - rhs);
    if (residual > tol.residual_atol)
        throw NoSolution("step_implicit: residual " + std::to_string(residual) +
                         " exceeds tolerance");
    return {sol.head(state_dim), sol.tail(lhs.cols() - state_dim)};
}

Trajectory simulate_closed_loop(const DescriptorSystem& sys, const Controller& ctrl,
                                const Vector& x0, int T, const Tolerance& tol) {
    check_horizon(T);
    if (x0.size() != sys.n())
        throw DimensionMismatch("simulate_closed_loop: x0 has length " +
                                std::to_string(x0.size()));
    if (!sys.init.contains(x0, tol))
        throw InitialStateOutsideSet("simulate_closed_loop: x0 is outside the initial set");
    using numkit::hcat;
    using numkit::vcat;
    const Matrix lhs = vcat(hcat(sys.E, -sys.B), hcat(ctrl.Ec, -ctrl.Bc));
    const Matrix rhs_map = vcat(sys.A, ctrl.Ac);
    Trajectory traj;
    traj.horizon = T;
    traj.x.reserve(static_cast<std::size_t>(T) + 1);
    Vector x = x0;
    traj.x.push_back(x);
    traj.y.push_back(sys.C * x);
    for (int t = 0; t < T; ++t) {
        try {
            auto [x_next, u] = step_implicit(lhs, rhs_map * x, sys.n(), tol);
            traj.u.push_back(u);
            x = x_next;
        } catch (const NonUnique& e) {
            throw NonUnique(std::string(e.what()) + " at t=" + std::to_string(t), t);
        } catch (const NoSolution& e) {
            throw NoSolution(std::string(e.what()) + " at t=" + std::to_string(t), t);
        }
        traj.x.push_back(x);
        traj.y.push_back(sys.C * x);
    }
    return traj;
}

std::pair<Trajectory, std::vector<Vector>> simulate_refined(const DescriptorSystem& sys,
                                                            const RefinedController& rc,
                                                            const Vector& x0, int T,
                                                            const Tolerance& tol) {
    check_horizon(T);
    if (x0.size() != sys.n())
        throw DimensionMismatch("simulate_refined: x0 has length " + std::to_string(x0.size()));
    if (!sys.init.contains(x0, tol))
        throw InitialStateOutsideSet("simulate_refined: x0 is outside the initial set");
    Trajectory traj;
    traj.horizon = T;
    std::vector<Vector> z_path;
    Vector x = x0;
    Vector z = rc.H.H * x0;
    traj.x.push_back(x);
    traj.y.push_back(sys.C * x);
    z_path.push_back(z);
    for (int t = 0; t < T; ++t) {
        const Vector s_a = rc.P * z;
        const Vector s = rc.interface.apply(x, s_a);
        traj.u.push_back(rc.Cu * x + rc.Du * s);
        x = rc.Ad * x + rc.Bd * s;
        z = rc.Kz * z;
        traj.x.push_back(x);
        traj.y.push_back(sys.C * x);
        z_path.push_back(z);
    }
    return {std::move(traj), std::move(z_path)};
}

ComparisonReport compare_outputs(const Trajectory& t1, const Trajectory& t2, double bound) {
    if (t1.horizon != t2.horizon)
        throw DimensionMismatch("compare_outputs: horizons differ");
    ComparisonReport rep;
    rep.horizon = t1.horizon;
    for (std::size_t t = 0; t < t1.y.size(); ++t) {
        if (t1.y[t].size() != t2.y[t].size())
            throw DimensionMismatch("compare_outputs: output dimensions differ");
        rep.max_output_dev = std::max(rep.max_output_dev,
                                      numkit::inf_norm(t1.y[t] - t2.y[t]));
    }
    rep.pass = rep.max_output_dev <= bound;
    return rep;
}

ComparisonReport compare_refined_run(const DescriptorSystem& conc, const RefinedController& rc,
                                     const ClosedLoopLinear& abs_cl, const Matrix& abs_C,
                                     const Vector& x0, int T, double bound,
                                     const Tolerance& tol) {
    auto [traj, z_path] = simulate_refined(conc, rc, x0, T, tol);
    ComparisonReport rep;
    rep.horizon = T;
    Vector xa = rc.H.H * x0;
    for (int t = 0; t <= T; ++t) {
        rep.max_output_dev = std::max(
            rep.max_output_dev, numkit::inf_norm(abs_C * xa - traj.y[static_cast<std::size_t>(t)]));
        rep.max_relation_dev = std::max(
            rep.max_relation_dev,
            numkit::inf_norm(rc.H.H * traj.x[static_cast<std::size_t>(t)] -
                             z_path[static_cast<std::size_t>(t)]));
        xa = abs_cl.K * xa;
    }
    rep.pass = rep.max_output_dev <= bound && rep.max_relation_dev <= bound;
    return rep;
}

}  // namespace dsrefine
