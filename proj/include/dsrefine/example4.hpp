#pragma once

#include "dsrefine/dvtransform.hpp"
#include "dsrefine/systems.hpp"

// Built-in reference example used by the verify-example4 command and the
// acceptance checks: a three-state descriptor plant with one algebraic
// constraint, its two-state minimal abstraction, the relation between them,
// and a stabilizing abstract controller.

namespace dsrefine::example4 {

/// Three-state plant: E singular, input tied to the third state, initial
/// set [-1,1]^3.
DescriptorSystem concrete();

/// Two-state minimal abstraction, initial set R^2.
DescriptorSystem abstract_system();

/// Graph map with x_a = H x, H = [[0,0,1],[0,1,-1]].
Matrix relation_h();

/// Abstract controller [1,1] x_a(t+1) = [0.5,0.5] x_a(t) + u_a(t).
Controller abstract_controller();

/// The reference driving-variable form of the plant (kernel basis oriented
/// as [0,-1,0]); to_dv may return the opposite sign.
DrivingVariableSystem concrete_dv_reference();

/// The reference driving-variable form of the abstraction (kernel basis
/// oriented as [0,-1]).
DrivingVariableSystem abstract_dv_reference();

/// Explicit map of the refined closed loop after substituting x_a = H x;
/// self-consistent with the driving-variable form above.
Matrix closed_loop_substituted();

}  // namespace dsrefine::example4
