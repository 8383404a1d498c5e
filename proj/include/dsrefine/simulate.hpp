#pragma once

#include <utility>
#include <vector>

#include "dsrefine/refinement.hpp"

namespace dsrefine {

/// Well-posedness rank certificates for a plant/controller pair.
struct WellPosednessReport {
    int rank_lhs = 0;   ///< rank of [E B; Ec Bc]
    int rank_aug = 0;   ///< rank of [E B A; Ec Bc Ac]
    bool existence_ok = false;   ///< rank_lhs == rank_aug
    bool uniqueness_ok = false;  ///< rank_aug == n + p
    bool verdict = false;
};

/// Deviation summary of two finite-horizon runs.
struct ComparisonReport {
    int horizon = 0;
    double max_output_dev = 0.0;
    double max_relation_dev = 0.0;
    bool pass = false;
};

WellPosednessReport check_wellposed(const DescriptorSystem& sys, const Controller& ctrl,
                                    const Tolerance& tol = {});

/**
 * Solve one implicit step lhs * [x_next; u] = rhs for the unique pair.
 * state_dim splits the solution. Throws NonUnique when lhs is column-rank
 * deficient, NoSolution when the residual exceeds tolerance.
 */
std::pair<Vector, Vector> step_implicit(const Matrix& lhs, const Vector& rhs, int state_dim,
                                        const Tolerance& tol = {});

/// Roll out the interconnected plant/controller pair from x0 for T steps.
/// Throws InitialStateOutsideSet, and NoSolution/NonUnique with the failing
/// time index.
Trajectory simulate_closed_loop(const DescriptorSystem& sys, const Controller& ctrl,
                                const Vector& x0, int T, const Tolerance& tol = {});

/// Roll out the plant under a refined controller; also returns the internal
/// z sequence (length T+1).
std::pair<Trajectory, std::vector<Vector>> simulate_refined(const DescriptorSystem& sys,
                                                            const RefinedController& rc,
                                                            const Vector& x0, int T,
                                                            const Tolerance& tol = {});

/// Entrywise max deviation of the output sequences; pass iff within bound.
ComparisonReport compare_outputs(const Trajectory& t1, const Trajectory& t2, double bound);

/**
 * Run the refined loop from x0 and the explicit abstract closed loop from
 * H x0 over the same horizon; reports the worst output deviation and the
 * worst violation of z(t) = H x(t).
 */
ComparisonReport compare_refined_run(const DescriptorSystem& conc, const RefinedController& rc,
                                     const ClosedLoopLinear& abs_cl, const Matrix& abs_C,
                                     const Vector& x0, int T, double bound,
                                     const Tolerance& tol = {});

}  // namespace dsrefine
