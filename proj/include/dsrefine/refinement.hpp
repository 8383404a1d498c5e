#pragma once

#include <string>

#include "dsrefine/relations.hpp"

namespace dsrefine {

/// Unique continuation of a well-posed plant/controller pair, reduced to
/// explicit linear form x(t+1) = K x(t), u(t) = L x(t).
struct ClosedLoopLinear {
    Matrix K, L;
};

/**
 * Concrete controller refined from an abstract one.
 *
 * Runtime law, given plant state x and internal state z (a copy of the
 * abstract closed loop, initialized z(0) = H x(0)):
 *
 *   s_a = P z,  s = G (drift x + Bda s_a),  z+ = Kz z
 *   Bd^T x+ = Bd^T Ad x + Bd^T Bd s   (lifting constraint on the plant)
 *   u = Cu x + Du s
 *
 * The lifting rows together with the plant equation pin x+ uniquely; the
 * certificates for that are checked at construction.
 */
struct RefinedController {
    Matrix Kz;            ///< internal dynamics z+ = Kz z
    Matrix P;             ///< abstract driving schedule s_a = P z
    InterfaceMap interface;
    Matrix Ad, Bd, Cu, Du;  ///< concrete driving-variable data
    LinearStateMap H;     ///< initialization map z(0) = H x(0)

    int z_dim() const { return static_cast<int>(Kz.rows()); }
    Matrix lift_left() const { return Bd.transpose(); }
    Matrix lift_dyn_state() const { return Bd.transpose() * Ad; }
    Matrix lift_dyn_input() const { return Bd.transpose() * Bd; }
    const Matrix& out_state() const { return Cu; }
    const Matrix& out_input() const { return Du; }
};

/**
 * Reduce a well-posed plant/controller pair to its explicit closed loop by
 * solving [E -B; Ec -Bc] [x+; u] = [A; Ac] x columnwise. Throws NotWellPosed
 * naming the failing rank condition.
 */
ClosedLoopLinear closed_loop_reduce(const DescriptorSystem& abs, const Controller& ctrl,
                                    const Tolerance& tol = {});

/**
 * Driving-input schedule reproducing a closed loop through the
 * driving-variable form: P = N^T ([K; L] - [Ad; Cu]), so that
 * Ad x + Bd (P x) = K x and Cu x + Du (P x) = L x.
 */
Matrix abstract_s_schedule(const DrivingVariableSystem& abs_dv, const ClosedLoopLinear& cl,
                           const Tolerance& tol = {});

/**
 * Full refinement pipeline: relation check, abstract closed-loop reduction,
 * driving schedule, interface synthesis, lifting certificates. Throws
 * RelationRejected / NotWellPosed / Infeasible naming the failing stage.
 */
RefinedController refine_end_to_end(const DescriptorSystem& conc, const DescriptorSystem& abs,
                                    const LinearStateMap& rel, const Controller& ctrl_a,
                                    const Tolerance& tol = {});

RefinedController load_refined(const std::string& path);
void save_refined(const RefinedController& rc, const std::string& path);

}  // namespace dsrefine
