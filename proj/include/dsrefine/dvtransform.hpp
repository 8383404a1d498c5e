#pragma once

#include <string>

#include "dsrefine/systems.hpp"

namespace dsrefine {

/**
 * Driving-variable form of a descriptor system.
 *
 * The non-determinism of E x(t+1) = A x(t) + B u(t) is re-parametrised by a
 * free driving input s of dimension ps:
 *
 *   x(t+1) = Ad x(t) + Bd s(t)
 *   u(t)   = Cu x(t) + Du s(t)
 *   y(t)   = C x(t)
 *
 * where [Ad; Cu] is a particular solution map and the columns of [Bd; Du]
 * form an orthonormal basis of ker [E -B].
 */
struct DrivingVariableSystem {
    Matrix Ad, Bd, Cu, Du, C;
    InitialSet init;

    int n() const { return static_cast<int>(Ad.rows()); }
    int ps() const { return static_cast<int>(Bd.cols()); }
    int p() const { return static_cast<int>(Cu.rows()); }
    int k() const { return static_cast<int>(C.rows()); }

    /// The kernel basis [Bd; Du], stacked.
    Matrix kernel_basis() const;
    /// The particular solution map [Ad; Cu], stacked.
    Matrix particular_map() const;
};

/// Construct the driving-variable form. Throws Assumption1Violated when
/// [E -B] lacks full row rank.
DrivingVariableSystem to_dv(const DescriptorSystem& sys, const Tolerance& tol = {});

/**
 * Check that dv is a valid driving-variable form of sys: [E -B]*[Ad;Cu] = A,
 * [E -B]*[Bd;Du] = 0, [Bd;Du] orthonormal with exactly dim ker [E -B]
 * columns. Accepts any kernel basis orientation, not just the one produced
 * by to_dv.
 */
bool check_dv_consistency(const DescriptorSystem& sys, const DrivingVariableSystem& dv,
                          const Tolerance& tol = {});

/**
 * Recover the driving input of a descriptor transition: the s with
 * [x_next; u] = [Ad; Cu] x + [Bd; Du] s for the canonical form of sys.
 * Throws NotATransition when (x, u, x_next) violates the descriptor
 * equation beyond tolerance.
 */
Vector recover_driving_input(const DescriptorSystem& sys, const Vector& x, const Vector& u,
                             const Vector& x_next, const Tolerance& tol = {});

/**
 * Randomized two-directional equivalence check between a descriptor system
 * and a driving-variable form: DV trajectories satisfy the descriptor
 * equations, and descriptor transitions are reproduced by the DV with a
 * recovered driving input. Returns false immediately when
 * check_dv_consistency fails.
 */
bool verify_ds_dv_equivalence(const DescriptorSystem& sys, const DrivingVariableSystem& dv,
                              int horizon, int samples, unsigned seed,
                              const Tolerance& tol = {});

DrivingVariableSystem load_dv(const std::string& path);
void save_dv(const DrivingVariableSystem& dv, const std::string& path);

}  // namespace dsrefine
