#include <doctest.h>

#include "dsrefine/example4.hpp"
#include "dsrefine/simulate.hpp"
#include "support.hpp"

using namespace dsrefine;
namespace nk = numkit;

namespace {

/// Static controller equivalent to the refined one for the reference pair,
/// with the internal state eliminated through the relation: rows pin the
/// free successor direction and the plant input.
Controller reference_static_controller() {
    Matrix Ec(2, 3), Ac(2, 3), Bc(2, 1);
    Ec << 0, -1, 0,
          0, 0, 0;
    Ac << 0, -0.5, 1,
          0, 0, -1;
    Bc << 0, -1;
    return Controller(Ec, Ac, Bc);
}

DescriptorSystem concrete_anywhere() {
    auto sys = example4::concrete();
    return DescriptorSystem(sys.E, sys.A, sys.B, sys.C, InitialSet::full_space(3));
}

}  // namespace

TEST_CASE("well-posedness ranks on the reference pair") {
    const auto rep = check_wellposed(example4::abstract_system(),
                                     example4::abstract_controller());
    CHECK(rep.rank_lhs == 3);
    CHECK(rep.rank_aug == 3);
    CHECK(rep.existence_ok);
    CHECK(rep.uniqueness_ok);
    CHECK(rep.verdict);
}

TEST_CASE("empty controller: solvable but not unique") {
    const Controller empty(Matrix(0, 3), Matrix(0, 3), Matrix(0, 1));
    const auto rep = check_wellposed(example4::concrete(), empty);
    CHECK(rep.rank_lhs == 3);
    CHECK(rep.rank_aug == 3);
    CHECK(rep.existence_ok);
    CHECK_FALSE(rep.uniqueness_ok);
    CHECK_FALSE(rep.verdict);
}

TEST_CASE("controller constraining only the state kills existence") {
    Matrix Ac(1, 3);
    Ac << 1, 0, 0;
    const Controller ctrl(Matrix::Zero(1, 3), Ac, Matrix::Zero(1, 1));
    const auto rep = check_wellposed(example4::concrete(), ctrl);
    CHECK_FALSE(rep.existence_ok);
}

TEST_CASE("check_wellposed validates controller shape") {
    const Controller wrong(Matrix(0, 2), Matrix(0, 2), Matrix(0, 1));
    CHECK_THROWS_AS(check_wellposed(example4::concrete(), wrong), DimensionMismatch);
}

TEST_CASE("step_implicit solves the non-singular explicit case") {
    Matrix A(2, 2), B(2, 1);
    A << 0.5, 1, 0, -0.5;
    B << 1, 2;
    Vector x(2), u(1);
    x << 1, -1;
    u << 0.25;
    // lhs [I -B; 0 I] with u pinned externally.
    const Matrix lhs = nk::vcat(nk::hcat(Matrix::Identity(2, 2), -B),
                                nk::hcat(Matrix::Zero(1, 2), Matrix::Identity(1, 1)));
    Vector rhs(3);
    rhs.head(2) = A * x;
    rhs.tail(1) = u;
    const auto [x_next, u_out] = step_implicit(lhs, rhs, 2);
    CHECK(nk::inf_norm(x_next - (A * x + B * u)) <= 1e-12);
    CHECK(nk::inf_norm(u_out - u) <= 1e-12);
}

TEST_CASE("step_implicit failure modes") {
    // Column-rank deficiency: the free direction is never pinned.
    CHECK_THROWS_AS(step_implicit(example4::concrete().stacked(), Vector::Zero(3), 3),
                    NonUnique);
    // Full column rank but contradictory rows.
    Matrix lhs(3, 1);
    lhs << 1, 0, 0;
    Vector rhs(3);
    rhs << 1, 0, 1;
    CHECK_THROWS_AS(step_implicit(lhs, rhs, 1), NoSolution);
    CHECK_THROWS_AS(step_implicit(lhs, Vector::Zero(2), 1), DimensionMismatch);
}

TEST_CASE("abstract closed loop trajectory matches the hand iteration") {
    Vector x0(2);
    x0 << 1, 0;
    const auto traj = simulate_closed_loop(example4::abstract_system(),
                                           example4::abstract_controller(), x0, 3);
    REQUIRE(traj.x.size() == 4);
    Matrix expected(4, 2);
    expected << 1, 0,
                0, -0.5,
                -0.5, 0.25,
                0.25, 0.125;
    for (int t = 0; t <= 3; ++t)
        CHECK(nk::inf_norm(traj.x[static_cast<std::size_t>(t)] -
                           expected.row(t).transpose()) <= 1e-12);
    // u_a = -x_{a,1} throughout.
    for (int t = 0; t < 3; ++t)
        CHECK(std::abs(traj.u[static_cast<std::size_t>(t)](0) +
                       traj.x[static_cast<std::size_t>(t)](0)) <= 1e-12);
    CHECK(membership_residual(example4::abstract_system(), traj) <= 1e-9);
}

TEST_CASE("composed reference loop follows the substituted closed-form map") {
    const auto sys = concrete_anywhere();
    const auto ctrl = reference_static_controller();
    CHECK(check_wellposed(sys, ctrl).verdict);
    const Matrix K = example4::closed_loop_substituted();
    std::mt19937 rng(3u);
    for (int i = 0; i < 10; ++i) {
        const Vector x0 = testsupport::random_vector(rng, 3);
        const auto traj = simulate_closed_loop(sys, ctrl, x0, 4);
        Vector expect = x0;
        for (int t = 1; t <= 4; ++t) {
            expect = K * expect;
            CHECK(nk::inf_norm(traj.x[static_cast<std::size_t>(t)] - expect) <= 1e-9);
        }
        // The plant input is always the third state, negated.
        for (int t = 0; t < 4; ++t)
            CHECK(std::abs(traj.u[static_cast<std::size_t>(t)](0) +
                           traj.x[static_cast<std::size_t>(t)](2)) <= 1e-9);
    }
}

TEST_CASE("simulate guards") {
    const auto sys = example4::concrete();  // box initial set
    const auto ctrl = reference_static_controller();
    Vector outside(3);
    outside << 2, 0, 0;
    CHECK_THROWS_AS(simulate_closed_loop(sys, ctrl, outside, 1), InitialStateOutsideSet);
    CHECK_THROWS_AS(simulate_closed_loop(sys, ctrl, Vector::Zero(2), 1), DimensionMismatch);
    CHECK_THROWS_AS(simulate_closed_loop(sys, ctrl, Vector::Zero(3), -1), DimensionMismatch);
    CHECK_THROWS_AS(simulate_closed_loop(sys, ctrl, Vector::Zero(3), 20000), DimensionMismatch);

    const auto zero_run = simulate_closed_loop(sys, ctrl, Vector::Zero(3), 0);
    CHECK(zero_run.horizon == 0);
    CHECK(zero_run.x.size() == 1);
    CHECK(zero_run.u.empty());

    // Underconstrained pair: refused at the first step with the time index.
    const Controller empty(Matrix(0, 3), Matrix(0, 3), Matrix(0, 1));
    try {
        simulate_closed_loop(concrete_anywhere(), empty, Vector::Zero(3), 2);
        FAIL("expected NonUnique");
    } catch (const NonUnique& e) {
        CHECK(e.time_index() == 0);
    }
}

TEST_CASE("free-driving runs keep the input tied to the third state") {
    const auto sys = concrete_anywhere();
    const auto dv = to_dv(sys);
    std::mt19937 rng(17u);
    for (int i = 0; i < 20; ++i) {
        Vector x = testsupport::random_vector(rng, 3);
        for (int t = 0; t < 10; ++t) {
            const Vector s = testsupport::random_vector(rng, 1);
            const Vector u = dv.Cu * x + dv.Du * s;
            CHECK(std::abs(u(0) + x(2)) <= 1e-12);
            x = dv.Ad * x + dv.Bd * s;
        }
    }
}

TEST_CASE("closed-loop trajectories satisfy the generating equations") {
    std::mt19937 rng(23u);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 3);
        const int p = 1 + static_cast<int>(rng() % 2);
        const int pp = std::min(n, p);
        const int q = static_cast<int>(rng() % static_cast<unsigned>(pp + 1));
        auto [sys, ctrl] = testsupport::random_wellposed_pair(rng, n, pp, q);
        CHECK(check_wellposed(sys, ctrl).verdict);
        const Vector x0 = testsupport::random_vector(rng, n);
        const auto traj = simulate_closed_loop(sys, ctrl, x0, 30);
        CHECK(membership_residual(sys, traj) <= 1e-9);
        // Determinism: the same inputs give bit-identical runs.
        const auto again = simulate_closed_loop(sys, ctrl, x0, 30);
        CHECK(nk::inf_norm(traj.x.back() - again.x.back()) == 0.0);
    }
}

TEST_CASE("compare_outputs") {
    Trajectory a;
    a.horizon = 1;
    a.x = {Vector::Zero(1), Vector::Zero(1)};
    a.y = {Vector::Zero(1), Vector::Zero(1)};
    a.u = {Vector::Zero(1)};
    const auto same = compare_outputs(a, a, 1e-12);
    CHECK(same.max_output_dev == 0.0);
    CHECK(same.pass);

    Trajectory b = a;
    b.y[0](0) = 1.0;
    const auto diff = compare_outputs(a, b, 0.5);
    CHECK(diff.max_output_dev == 1.0);
    CHECK_FALSE(diff.pass);

    Trajectory c = a;
    c.horizon = 0;
    c.x.pop_back();
    c.y.pop_back();
    c.u.clear();
    CHECK_THROWS_AS(compare_outputs(a, c, 1.0), DimensionMismatch);
}
