#pragma once

#include <random>
#include <string>
#include <vector>

#include "dsrefine/numkit.hpp"

namespace dsrefine {

enum class InitialSetKind { FullSpace, SubspaceSpan, Box, Points };

/**
 * Set of admissible initial states.
 *
 * Four representations cover everything the cover/refinement checks need:
 * the whole space, the span of given generators, an axis-aligned box, and a
 * finite point list.
 */
struct InitialSet {
    InitialSetKind kind = InitialSetKind::FullSpace;
    int dim = 0;
    Matrix basis;                 ///< SubspaceSpan generators, dim rows
    Vector lower, upper;          ///< Box bounds, length dim each
    std::vector<Vector> points;   ///< Points payload

    static InitialSet full_space(int dim);
    static InitialSet subspace(const Matrix& basis);
    static InitialSet box(const Vector& lower, const Vector& upper);
    static InitialSet point_list(std::vector<Vector> pts);

    bool contains(const Vector& x, const Tolerance& tol = {}) const;

    /// Draw the index-th sample: Box uniform, FullSpace/SubspaceSpan standard
    /// normal coefficients, Points cycled by index.
    Vector sample(std::mt19937& rng, long index) const;
};

/// Linear descriptor plant E x(t+1) = A x(t) + B u(t), y = C x(t), with E
/// possibly singular. Dimensions are checked at construction.
struct DescriptorSystem {
    Matrix E, A, B, C;
    InitialSet init;

    DescriptorSystem() = default;
    DescriptorSystem(Matrix E, Matrix A, Matrix B, Matrix C, InitialSet init);

    int n() const { return static_cast<int>(E.rows()); }
    int p() const { return static_cast<int>(B.cols()); }
    int k() const { return static_cast<int>(C.rows()); }

    /// The stacked matrix [E -B] whose full row rank enables the
    /// driving-variable form.
    Matrix stacked() const;
};

/// Controller law E_c x(t+1) = A_c x(t) + B_c u(t) sharing the plant's state
/// and input.
struct Controller {
    Matrix Ec, Ac, Bc;

    Controller() = default;
    Controller(Matrix Ec, Matrix Ac, Matrix Bc);

    int rows() const { return static_cast<int>(Ec.rows()); }
};

/// Finite-horizon signal bundle: states x(0..T), outputs y(0..T), inputs
/// u(0..T-1). The final state carries no input.
struct Trajectory {
    int horizon = 0;
    std::vector<Vector> u;
    std::vector<Vector> x;
    std::vector<Vector> y;
};

struct ValidationReport {
    bool rank_B_ok = false;
    bool rank_C_ok = false;
    bool assumption1_ok = false;
    std::vector<std::string> messages;

    bool all_ok() const { return rank_B_ok && rank_C_ok && assumption1_ok; }
};

/// Check the standing rank assumptions: B full column rank, C full row rank,
/// [E -B] full row rank. Failures are reported, never thrown.
ValidationReport validate(const DescriptorSystem& sys, const Tolerance& tol = {});

/// Largest residual over the trajectory: max over t of the step equation
/// residual and the output equation residual, both in the entrywise max norm.
double membership_residual(const DescriptorSystem& sys, const Trajectory& traj);

DescriptorSystem load_system(const std::string& path);
void save_system(const DescriptorSystem& sys, const std::string& path);
Controller load_controller(const std::string& path);
void save_controller(const Controller& ctrl, const std::string& path);

/// CSV with header t,u1..up,x1..xn,y1..yk, one row per time index; the last
/// row leaves the u columns empty.
std::string trajectory_to_csv(const Trajectory& traj);
void save_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace dsrefine
