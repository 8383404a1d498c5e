#pragma once

// Randomized generators, independent oracles, and packaged verification
// checks. These back the command-line end-to-end verification and the test
// suites. The oracles are deliberately written from first principles (dense
// enumeration, least squares per step) so they cross-check the library's
// rank-based decision procedures rather than reusing them.

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dsrefine/systems.hpp"

namespace dsrefine::selftest {

Matrix random_matrix(std::mt19937& rng, int rows, int cols, double scale = 1.0);
Vector random_vector(std::mt19937& rng, int len, double scale = 1.0);

/// Well-conditioned invertible matrix near the identity.
Matrix mild_invertible(std::mt19937& rng, int n);

double spectral_norm(const Matrix& m);

/**
 * Random descriptor system satisfying the standing assumptions: q algebraic
 * rows (zero rows of E) whose B-block has full row rank, then the whole
 * [E A B] triple mixed by a well-conditioned left factor. a_scale shrinks A
 * for runs that iterate the dynamics.
 */
DescriptorSystem random_descriptor(std::mt19937& rng, int n, int p, int q, double a_scale = 1.0);

/**
 * Static well-posed controller for any valid plant: pins the driving input
 * to s = P x through the lifting rows, and the plant input to its
 * driving-variable value. P is scaled so the closed loop is a contraction,
 * making long comparison runs numerically meaningful. Also returns the
 * explicit closed-loop map.
 */
std::pair<Controller, Matrix> make_wellposed_controller(std::mt19937& rng,
                                                        const DescriptorSystem& sys);

/// Random plant with a contractive well-posed closed loop.
std::pair<DescriptorSystem, Controller> random_wellposed_pair(std::mt19937& rng, int n, int p,
                                                              int q);

/**
 * Block extension of a base system: new states are appended with explicit
 * dynamics fed by the old state and input, then the whole state is mixed by
 * an isomorphism. The projection onto the base state (composed with the
 * isomorphism) is a simulation relation by construction.
 */
struct Extension {
    DescriptorSystem sys;
    Matrix H;  ///< base_state = H * extended_state
};

Extension extend_system(std::mt19937& rng, const DescriptorSystem& base, int extra);

/**
 * Independent successor-matching oracle. For sampled concrete states x and
 * abstract driving choices s_a, it measures how well some concrete
 * successor of x tracks the abstract successor of H x through H, by dense
 * least squares. Returns the worst residual found; a simulation relation
 * must keep it at numerical zero.
 */
double successor_match_residual(const DescriptorSystem& abs, const DescriptorSystem& conc,
                                const Matrix& H, int samples, unsigned seed);

/**
 * Trajectory-level oracle: follow a random abstract run and construct a
 * matching concrete run step by step through least squares. Returns the
 * worst mismatch of H x(t) against the abstract state.
 */
double trajectory_match_residual(const DescriptorSystem& abs, const DescriptorSystem& conc,
                                 const Matrix& H, int horizon, int samples, unsigned seed);

/// Outcome of one packaged verification check.
struct CheckResult {
    std::string name;
    bool pass = false;
    double metric = 0.0;  ///< worst residual/deviation observed, when meaningful
    std::string detail;
};

/**
 * End-to-end checks on the built-in reference example: refinement output
 * match, DV consistency, relation accept/reject with oracle confirmation,
 * well-posedness ranks, closed-loop spectrum, interface reproduction, and
 * relation forward-invariance. bound is the trajectory comparison bound.
 */
std::vector<CheckResult> run_reference_checks(const Tolerance& tol = {}, unsigned seed = 0,
                                              double bound = 1e-8);

/// Seeded randomized property suites: numeric-kernel invariants on 500
/// matrices up to 8x8, identity refinement on 20 well-posed pairs over 50
/// steps, and relation transitivity on constructed triples.
std::vector<CheckResult> run_property_suites(unsigned seed = 0);

/// Reference checks followed by the property suites.
std::vector<CheckResult> run_all(const Tolerance& tol = {}, unsigned seed = 0,
                                 double bound = 1e-8);

}  // namespace dsrefine::selftest
