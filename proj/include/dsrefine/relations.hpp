#pragma once

#include <string>

#include "dsrefine/dvtransform.hpp"

namespace dsrefine {

/// Graph of a linear map from concrete to abstract state: the relation
/// pairs (x_a, x) with x_a = H x.
struct LinearStateMap {
    Matrix H;

    int abstract_dim() const { return static_cast<int>(H.rows()); }
    int concrete_dim() const { return static_cast<int>(H.cols()); }
};

/// Outcome of the simulation-relation check, one flag per condition.
struct SimulationReport {
    bool output_match = false;   ///< Ca*H equals C
    bool step_match = false;     ///< abstract steps are matched through H
    bool initial_cover = false;  ///< H maps the concrete initial set into the abstract one
    Matrix drift;                ///< Ada*H - H*Ad
    bool verdict = false;        ///< conjunction of the three flags
};

/**
 * Static feedback producing the concrete driving input that tracks an
 * abstract step: s = G*(drift*x + Bda*s_a). Together with the concrete DV
 * maps this keeps x_a = H x invariant along closed-loop trajectories.
 */
struct InterfaceMap {
    Matrix G;
    Matrix drift;
    Matrix Bda;

    Vector apply(const Vector& x, const Vector& s_a) const {
        return G * (drift * x + Bda * s_a);
    }
};

/**
 * Decide whether x_a = H x is a simulation relation: outputs agree through
 * H, and every abstract successor is matched by a concrete successor whose
 * image under H equals it. Step matching is decided on the driving-variable
 * forms, where successor sets are affine and the condition reduces to two
 * image inclusions in im(H*Bd).
 */
SimulationReport check_simulation(const DescriptorSystem& abs, const DescriptorSystem& conc,
                                  const LinearStateMap& rel, const Tolerance& tol = {});

/// Exact test of H * conc_init inside abs_init for the supported kind
/// pairs; throws UnsupportedCombination otherwise.
bool check_initial_cover(const InitialSet& abs_init, const InitialSet& conc_init,
                         const LinearStateMap& rel, const Tolerance& tol = {});

/// Exact test that every abstract initial state has a concrete preimage
/// under H inside conc_init; throws UnsupportedCombination for box-valued
/// conc_init.
bool check_init_simulated(const InitialSet& abs_init, const InitialSet& conc_init,
                          const LinearStateMap& rel, const Tolerance& tol = {});

/// Build the interface map for an accepted relation; every basis direction
/// of the abstract step is certified against im(H*Bd), otherwise Infeasible.
InterfaceMap synthesize_interface(const DrivingVariableSystem& abs_dv,
                                  const DrivingVariableSystem& conc_dv,
                                  const LinearStateMap& rel, const Tolerance& tol = {});

LinearStateMap load_relation(const std::string& path);
void save_relation(const LinearStateMap& rel, const std::string& path);

}  // namespace dsrefine
