#include <doctest.h>

#include <cstdio>

#include "dsrefine/example4.hpp"
#include "dsrefine/relations.hpp"
#include "support.hpp"

using namespace dsrefine;
namespace nk = numkit;

TEST_CASE("reference relation is accepted with exact output match") {
    const auto abs = example4::abstract_system();
    const auto conc = example4::concrete();
    const LinearStateMap rel{example4::relation_h()};
    const auto rep = check_simulation(abs, conc, rel);
    CHECK(rep.output_match);
    CHECK(rep.step_match);
    CHECK(rep.initial_cover);
    CHECK(rep.verdict);
    // Ca*H - C vanishes up to one floating-point rounding of 0.7 - 0.2.
    CHECK(nk::inf_norm(abs.C * rel.H - conc.C) <= 1e-15);
    // Drift is confined to the s-matchable directions.
    Matrix drift(2, 3);
    drift << 0, 0, 0, 0, 1, -1;
    CHECK(nk::inf_norm(rep.drift - drift) <= 1e-12);
}

TEST_CASE("identity relation on the same system is accepted") {
    const auto sys = example4::concrete();
    const LinearStateMap rel{Matrix::Identity(3, 3)};
    const auto rep = check_simulation(sys, sys, rel);
    CHECK(rep.verdict);
    CHECK(nk::inf_norm(rep.drift) <= 1e-12);
}

TEST_CASE("perturbed relation is rejected and the oracle agrees") {
    const auto abs = example4::abstract_system();
    const auto conc = example4::concrete();
    Matrix H = example4::relation_h();
    H(1, 1) -= 0.1;
    const auto rep = check_simulation(abs, conc, LinearStateMap{H});
    CHECK_FALSE(rep.verdict);
    const bool some_condition_failed = !rep.output_match || !rep.step_match;
    CHECK(some_condition_failed);
    // Independent confirmation: dense successor matching fails visibly.
    const double residual = testsupport::successor_match_residual(abs, conc, H, 200, 77u);
    CHECK(residual > 1e-6);
    // The unperturbed relation keeps the oracle at numerical zero.
    const double good = testsupport::successor_match_residual(abs, conc,
                                                              example4::relation_h(), 200, 77u);
    CHECK(good <= 1e-9);
}

TEST_CASE("check_simulation validates shapes") {
    const auto abs = example4::abstract_system();
    const auto conc = example4::concrete();
    CHECK_THROWS_AS(check_simulation(abs, conc, LinearStateMap{Matrix::Identity(3, 3)}),
                    DimensionMismatch);
    // Output dimensions must agree.
    DescriptorSystem wide_out(conc.E, conc.A, conc.B, Matrix::Identity(3, 3),
                              conc.init);
    CHECK_THROWS_AS(check_simulation(abs, wide_out, LinearStateMap{example4::relation_h()}),
                    DimensionMismatch);
}

TEST_CASE("initial cover decisions") {
    const LinearStateMap rel{example4::relation_h()};
    const auto box3 = InitialSet::box(Vector::Constant(3, -1.0), Vector::Constant(3, 1.0));

    CHECK(check_initial_cover(InitialSet::full_space(2), box3, rel));

    // Image of the cube under row 2 of H is [-2,2]: too big for this target.
    const auto small_target =
        InitialSet::box(Vector::Constant(2, -0.5), Vector::Constant(2, 0.5));
    CHECK_FALSE(check_initial_cover(small_target, box3, rel));

    // Tight target box: row 1 image is [-1,1], row 2 image is [-2,2].
    Vector lo(2), hi(2);
    lo << -1, -2;
    hi << 1, 2;
    CHECK(check_initial_cover(InitialSet::box(lo, hi), box3, rel));

    // Point sources are checked pointwise against any target kind.
    const auto origin = InitialSet::point_list({Vector::Zero(3)});
    CHECK(check_initial_cover(small_target, origin, rel));
    // H*(1,1,1) = (1, 0): outside [-0.5,0.5] in the first coordinate.
    const auto corner = InitialSet::point_list({Vector::Ones(3)});
    CHECK_FALSE(check_initial_cover(small_target, corner, rel));

    // Span into span: containment of images.
    Matrix cb(3, 1);
    cb << 0, 1, 0;
    Matrix ab(2, 1);
    ab << 0, 1;
    CHECK(check_initial_cover(InitialSet::subspace(ab), InitialSet::subspace(cb), rel));
    Matrix ab2(2, 1);
    ab2 << 1, 0;
    CHECK_FALSE(check_initial_cover(InitialSet::subspace(ab2), InitialSet::subspace(cb), rel));

    // Full concrete space into an abstract span: H's image must fit.
    CHECK(check_initial_cover(InitialSet::subspace(Matrix::Identity(2, 2)),
                              InitialSet::full_space(3), rel));

    // No exact test for a box source against a span target.
    CHECK_THROWS_AS(check_initial_cover(InitialSet::subspace(ab), box3, rel),
                    UnsupportedCombination);
}

TEST_CASE("initial simulated-state decisions") {
    const LinearStateMap rel{example4::relation_h()};

    // H has full row rank: every abstract point has a preimage.
    CHECK(check_init_simulated(InitialSet::full_space(2), InitialSet::full_space(3), rel));

    // Restricting the concrete states to span{e1} kills the image.
    Matrix e1(3, 1);
    e1 << 1, 0, 0;
    CHECK_FALSE(check_init_simulated(InitialSet::full_space(2), InitialSet::subspace(e1), rel));

    // Point-to-point.
    CHECK(check_init_simulated(InitialSet::point_list({Vector::Zero(2)}),
                               InitialSet::point_list({Vector::Zero(3)}), rel));
    Vector target(2);
    target << 1, 0;
    CHECK_FALSE(check_init_simulated(InitialSet::point_list({target}),
                                     InitialSet::point_list({Vector::Zero(3)}), rel));
    // x = (0,1,1) maps exactly to (1,0).
    Vector pre(3);
    pre << 0, 1, 1;
    CHECK(check_init_simulated(InitialSet::point_list({target}),
                               InitialSet::point_list({Vector::Zero(3), pre}), rel));

    // Abstract box inside the image of a concrete span.
    Matrix cb(3, 2);
    cb << 0, 0, 1, 0, 0, 1;
    const auto abs_box = InitialSet::box(Vector::Constant(2, -0.25), Vector::Constant(2, 0.25));
    CHECK(check_init_simulated(abs_box, InitialSet::subspace(cb), rel));
    CHECK_FALSE(check_init_simulated(abs_box, InitialSet::subspace(e1), rel));

    // Box-valued concrete sets have no exact test here.
    CHECK_THROWS_AS(check_init_simulated(InitialSet::full_space(2),
                                         InitialSet::box(Vector::Constant(3, -1.0),
                                                         Vector::Constant(3, 1.0)),
                                         rel),
                    UnsupportedCombination);
}

TEST_CASE("interface reproduces the reference feedback up to basis sign") {
    const auto abs_dv = to_dv(example4::abstract_system());
    const auto conc_dv = to_dv(example4::concrete());
    const LinearStateMap rel{example4::relation_h()};
    const auto iface = synthesize_interface(abs_dv, conc_dv, rel);

    // Orientation factors of our kernel bases against the reference ones.
    const auto conc_ref = example4::concrete_dv_reference();
    const auto abs_ref = example4::abstract_dv_reference();
    const double sc = (conc_dv.kernel_basis().transpose() * conc_ref.kernel_basis())(0, 0);
    const double sa = (abs_dv.kernel_basis().transpose() * abs_ref.kernel_basis())(0, 0);
    REQUIRE(std::abs(std::abs(sc) - 1.0) <= 1e-12);
    REQUIRE(std::abs(std::abs(sa) - 1.0) <= 1e-12);

    // In the reference orientation the interface is s = s_a - [0,1,-1] x.
    Matrix state_term(1, 3);
    state_term << 0, 1, -1;
    CHECK(nk::inf_norm(sc * (iface.G * iface.drift) + state_term) <= 1e-12);
    const Matrix sa_term = iface.G * iface.Bda;
    CHECK(std::abs(sc * sa * sa_term(0, 0) - 1.0) <= 1e-12);

    // Correctness on random pairs: tracking through H is exact.
    std::mt19937 rng(5u);
    for (int i = 0; i < 100; ++i) {
        const Vector x = testsupport::random_vector(rng, 3);
        const Vector s_a = testsupport::random_vector(rng, 1);
        const Vector s = iface.apply(x, s_a);
        const Vector lhs = rel.H * (conc_dv.Ad * x + conc_dv.Bd * s);
        const Vector rhs = abs_dv.Ad * rel.H * x + abs_dv.Bd * s_a;
        CHECK(nk::inf_norm(lhs - rhs) <= 1e-8);
    }
}

TEST_CASE("interface for the identity relation is a passthrough") {
    const auto sys = example4::concrete();
    const auto dv = to_dv(sys);
    const auto iface = synthesize_interface(dv, dv, LinearStateMap{Matrix::Identity(3, 3)});
    CHECK(nk::inf_norm(iface.drift) <= 1e-12);
    std::mt19937 rng(6u);
    for (int i = 0; i < 20; ++i) {
        const Vector x = testsupport::random_vector(rng, 3);
        const Vector s_a = testsupport::random_vector(rng, 1);
        CHECK(nk::inf_norm(iface.apply(x, s_a) - s_a) <= 1e-9);
    }
}

TEST_CASE("interface synthesis refuses unmatched step directions") {
    const auto abs_dv = to_dv(example4::abstract_system());
    const auto conc_dv = to_dv(example4::concrete());
    Matrix H = example4::relation_h();
    H(1, 1) -= 0.1;
    CHECK_THROWS_AS(synthesize_interface(abs_dv, conc_dv, LinearStateMap{H}), Infeasible);
}

TEST_CASE("accepted relations match trajectories; rejected ones witness a gap") {
    std::mt19937 rng(31u);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 2);
        const int p = 1 + static_cast<int>(rng() % 2);
        const int pp = std::min(p, n);
        const int q = static_cast<int>(rng() % static_cast<unsigned>(pp + 1));
        const auto base = testsupport::random_descriptor(rng, n, pp, q, 0.4);
        const auto ext = testsupport::extend_system(rng, base, 1 + static_cast<int>(rng() % 2));

        const auto rep = check_simulation(base, ext.sys, LinearStateMap{ext.H});
        CHECK(rep.output_match);
        CHECK(rep.step_match);
        CHECK(rep.verdict);
        CHECK(testsupport::trajectory_match_residual(base, ext.sys, ext.H, 5, 8,
                                                     100u + static_cast<unsigned>(trial)) <=
              1e-8);
    }
}

TEST_CASE("relation checking is transitive on constructed triples") {
    std::mt19937 rng(53u);
    for (int trial = 0; trial < 15; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 2);
        const int p = 1;
        const auto s1 = testsupport::random_descriptor(rng, n, p, static_cast<int>(rng() % 2),
                                                       0.4);
        const auto e2 = testsupport::extend_system(rng, s1, 1);
        const auto e3 = testsupport::extend_system(rng, e2.sys, 1 + static_cast<int>(rng() % 2));

        CHECK(check_simulation(s1, e2.sys, LinearStateMap{e2.H}).verdict);
        CHECK(check_simulation(e2.sys, e3.sys, LinearStateMap{e3.H}).verdict);
        const Matrix composed = e2.H * e3.H;
        CHECK(check_simulation(s1, e3.sys, LinearStateMap{composed}).verdict);
    }
}

TEST_CASE("relation file round trip") {
    const std::string path = "dsrefine_test_rel.json";
    const LinearStateMap rel{example4::relation_h()};
    save_relation(rel, path);
    const auto loaded = load_relation(path);
    std::remove(path.c_str());
    CHECK(nk::inf_norm(loaded.H - rel.H) == 0.0);
}
