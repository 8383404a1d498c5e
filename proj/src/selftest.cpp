#include "dsrefine/selftest.hpp"

#include <algorithm>
#include <cmath>

#include "dsrefine/example4.hpp"
#include "dsrefine/simulate.hpp"

namespace dsrefine::selftest {

Matrix random_matrix(std::mt19937& rng, int rows, int cols, double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
    return m;
}

Vector random_vector(std::mt19937& rng, int len, double scale) {
    return random_matrix(rng, len, 1, scale).col(0);
}

Matrix mild_invertible(std::mt19937& rng, int n) {
    return Matrix::Identity(n, n) + random_matrix(rng, n, n, 0.3);
}

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

DescriptorSystem random_descriptor(std::mt19937& rng, int n, int p, int q, double a_scale) {
    const Tolerance tol{};
    Matrix E0 = Matrix::Zero(n, n);
    for (int i = 0; i < n - q; ++i) E0(i, i) = 1.0;
    Matrix B0;
    for (;;) {
        B0 = random_matrix(rng, n, p);
        if (numkit::rank_of(B0, tol) != p) continue;
        if (q > 0 && numkit::rank_of(B0.bottomRows(q), tol) != q) continue;
        break;
    }
    Matrix C;
    const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    for (;;) {
        C = random_matrix(rng, k, n);
        if (numkit::rank_of(C, tol) == k) break;
    }
    const Matrix A0 = random_matrix(rng, n, n, a_scale);
    const Matrix G = mild_invertible(rng, n);
    return DescriptorSystem(G * E0, G * A0, G * B0, C, InitialSet::full_space(n));
}

std::pair<Controller, Matrix> make_wellposed_controller(std::mt19937& rng,
                                                        const DescriptorSystem& sys) {
    const auto dv = to_dv(sys);
    const int ps = dv.ps();
    Matrix P = random_matrix(rng, ps, sys.n(), 0.3);
    if (ps > 0 && spectral_norm(dv.Bd * P) > 0.25)
        P *= 0.25 / spectral_norm(dv.Bd * P);
    const Matrix BdT = dv.Bd.transpose();
    using numkit::vcat;
    Controller ctrl(vcat(BdT, Matrix::Zero(sys.p(), sys.n())),
                    vcat(Matrix(BdT * dv.Ad + BdT * dv.Bd * P), Matrix(dv.Cu + dv.Du * P)),
                    vcat(Matrix::Zero(ps, sys.p()), -Matrix::Identity(sys.p(), sys.p())));
    const Matrix K = dv.Ad + dv.Bd * P;
    return {ctrl, K};
}

std::pair<DescriptorSystem, Controller> random_wellposed_pair(std::mt19937& rng, int n, int p,
                                                              int q) {
    DescriptorSystem sys = random_descriptor(rng, n, p, q);
    // Rescale A so the open driving-variable dynamics is a contraction.
    const auto dv0 = to_dv(sys);
    const double norm = spectral_norm(dv0.Ad);
    if (norm > 0.5)
        sys = DescriptorSystem(sys.E, sys.A * (0.5 / norm), sys.B, sys.C, sys.init);
    auto [ctrl, K] = make_wellposed_controller(rng, sys);
    (void)K;
    return {std::move(sys), std::move(ctrl)};
}

Extension extend_system(std::mt19937& rng, const DescriptorSystem& base, int extra) {
    using numkit::hcat;
    using numkit::vcat;
    const int n1 = base.n();
    const int n2 = n1 + extra;
    const Matrix E2 = vcat(hcat(base.E, Matrix::Zero(n1, extra)),
                           hcat(Matrix::Zero(extra, n1), Matrix::Identity(extra, extra)));
    const Matrix A2 = vcat(hcat(base.A, Matrix::Zero(n1, extra)),
                           random_matrix(rng, extra, n2, 0.3));
    const Matrix B2 = vcat(base.B, random_matrix(rng, extra, base.p(), 0.3));
    const Matrix C2 = hcat(base.C, Matrix::Zero(base.k(), extra));
    const Matrix T = mild_invertible(rng, n2);
    const Matrix H = hcat(Matrix::Identity(n1, n1), Matrix::Zero(n1, extra)) * T;
    Extension ext{DescriptorSystem(E2 * T, A2 * T, B2, C2 * T, InitialSet::full_space(n2)), H};
    return ext;
}

double successor_match_residual(const DescriptorSystem& abs, const DescriptorSystem& conc,
                                const Matrix& H, int samples, unsigned seed) {
    const auto adv = to_dv(abs);
    const auto cdv = to_dv(conc);
    std::mt19937 rng(seed);
    const Matrix HBd = H * cdv.Bd;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const Vector x = random_vector(rng, conc.n());
        const Vector xa = H * x;
        for (int trial = 0; trial < 3; ++trial) {
            const Vector sa = random_vector(rng, adv.ps());
            const Vector xa_next = adv.Ad * xa + adv.Bd * sa;
            const Vector target = xa_next - H * (cdv.Ad * x);
            const auto ls = numkit::min_norm_solve(HBd, target);
            worst = std::max(worst, numkit::inf_norm(HBd * ls.solution - target));
        }
    }
    return worst;
}

double trajectory_match_residual(const DescriptorSystem& abs, const DescriptorSystem& conc,
                                 const Matrix& H, int horizon, int samples, unsigned seed) {
    const auto adv = to_dv(abs);
    const auto cdv = to_dv(conc);
    std::mt19937 rng(seed);
    const Matrix HBd = H * cdv.Bd;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        Vector x = random_vector(rng, conc.n());
        Vector xa = H * x;
        for (int t = 0; t < horizon; ++t) {
            const Vector sa = random_vector(rng, adv.ps());
            const Vector xa_next = adv.Ad * xa + adv.Bd * sa;
            const auto ls = numkit::min_norm_solve(HBd, xa_next - H * (cdv.Ad * x));
            x = cdv.Ad * x + cdv.Bd * ls.solution;
            xa = xa_next;
            worst = std::max(worst, numkit::inf_norm(H * x - xa));
        }
    }
    return worst;
}

std::vector<CheckResult> run_reference_checks(const Tolerance& tol, unsigned seed, double bound) {
    const auto conc = example4::concrete();
    const auto abs = example4::abstract_system();
    const LinearStateMap rel{example4::relation_h()};
    const auto ctrl_a = example4::abstract_controller();

    CheckResult refinement{"refined-outputs-match-abstract", false, 0.0,
                           "100 initial states, 100 steps"};
    CheckResult invariance{"relation-forward-invariance", false, 0.0,
                           "z(t) = H x(t) along refined runs"};
    try {
        const auto rc = refine_end_to_end(conc, abs, rel, ctrl_a, tol);
        const auto cl = closed_loop_reduce(abs, ctrl_a, tol);
        std::mt19937 rng(seed);
        double worst_out = 0.0, worst_rel = 0.0;
        for (int i = 0; i < 100; ++i) {
            const Vector x0 = conc.init.sample(rng, i);
            const auto rep = compare_refined_run(conc, rc, cl, abs.C, x0, 100, bound, tol);
            worst_out = std::max(worst_out, rep.max_output_dev);
            worst_rel = std::max(worst_rel, rep.max_relation_dev);
        }
        refinement.metric = worst_out;
        refinement.pass = worst_out <= bound;
        invariance.metric = worst_rel;
        invariance.pass = worst_rel <= bound;
    } catch (const Error& e) {
        refinement.detail = e.what();
        invariance.detail = e.what();
    }

    CheckResult dv_check{"dv-transform-consistent", false, 0.0,
                         "computed and reference forms, 100 runs of horizon 20"};
    try {
        const auto dv = to_dv(conc, tol);
        const bool own = check_dv_consistency(conc, dv, tol);
        const bool reference = check_dv_consistency(conc, example4::concrete_dv_reference(), tol);
        const bool equivalent = verify_ds_dv_equivalence(conc, dv, 20, 100, seed, tol);
        dv_check.pass = own && reference && equivalent;
    } catch (const Error& e) {
        dv_check.detail = e.what();
    }

    CheckResult relation{"relation-checker-accepts-and-rejects", false, 0.0,
                         "oracle over 200 states on the perturbed map"};
    try {
        const auto rep = check_simulation(abs, conc, rel, tol);
        const double output_residual = numkit::inf_norm(abs.C * rel.H - conc.C);
        Matrix broken = rel.H;
        broken(1, 1) -= 0.1;
        const bool rejected = !check_simulation(abs, conc, LinearStateMap{broken}, tol).verdict;
        const double oracle = successor_match_residual(abs, conc, broken, 200, seed + 77);
        relation.metric = oracle;
        relation.pass = rep.verdict && output_residual <= 1e-15 && rejected && oracle > 1e-6;
    } catch (const Error& e) {
        relation.detail = e.what();
    }

    CheckResult ranks{"wellposedness-ranks", false, 0.0,
                      "stacked and augmented ranks equal state + input dimension"};
    try {
        const auto wp = check_wellposed(abs, ctrl_a, tol);
        const Controller empty(Matrix(0, 3), Matrix(0, 3), Matrix(0, 1));
        const auto under = check_wellposed(conc, empty, tol);
        ranks.metric = wp.rank_aug;
        ranks.pass = wp.rank_lhs == 3 && wp.rank_aug == 3 && wp.verdict &&
                     under.existence_ok && !under.uniqueness_ok;
    } catch (const Error& e) {
        ranks.detail = e.what();
    }

    CheckResult spectrum{"closed-loop-spectrum", false, 0.0,
                         "characteristic polynomial z^2 + 0.5 z + 0.5"};
    try {
        const auto cl = closed_loop_reduce(abs, ctrl_a, tol);
        const double c1_err = std::abs(-cl.K.trace() - 0.5);
        const double c0_err = std::abs(cl.K.determinant() - 0.5);
        const auto eig = cl.K.eigenvalues();
        double mod_err = 0.0;
        for (int i = 0; i < eig.size(); ++i)
            mod_err = std::max(mod_err, std::abs(std::abs(eig(i)) - std::sqrt(0.5)));
        spectrum.metric = std::max({c1_err, c0_err, mod_err});
        spectrum.pass = spectrum.metric <= 1e-12;
    } catch (const Error& e) {
        spectrum.detail = e.what();
    }

    CheckResult interface_check{"interface-reproduction", false, 0.0,
                                "sign-adjusted map plus 100 random tracking pairs"};
    try {
        const auto adv = to_dv(abs, tol);
        const auto cdv = to_dv(conc, tol);
        const auto iface = synthesize_interface(adv, cdv, rel, tol);
        // Orientation of the computed kernel bases against the reference ones.
        const double sc =
            (cdv.kernel_basis().transpose() * example4::concrete_dv_reference().kernel_basis())(0,
                                                                                                0);
        const double sa =
            (adv.kernel_basis().transpose() * example4::abstract_dv_reference().kernel_basis())(0,
                                                                                                0);
        Matrix state_term(1, 3);
        state_term << 0, 1, -1;
        const double map_err =
            std::max(numkit::inf_norm(sc * (iface.G * iface.drift) + state_term),
                     std::abs(sc * sa * (iface.G * iface.Bda)(0, 0) - 1.0));
        std::mt19937 rng(seed + 5);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            const Vector x = random_vector(rng, 3);
            const Vector s_a = random_vector(rng, 1);
            const Vector s = iface.apply(x, s_a);
            worst = std::max(worst, numkit::inf_norm(rel.H * (cdv.Ad * x + cdv.Bd * s) -
                                                     (adv.Ad * rel.H * x + adv.Bd * s_a)));
        }
        interface_check.metric = std::max(map_err, worst);
        interface_check.pass = map_err <= 1e-12 && worst <= bound;
    } catch (const Error& e) {
        interface_check.detail = e.what();
    }

    return {refinement, dv_check, relation, ranks, spectrum, interface_check, invariance};
}

std::vector<CheckResult> run_property_suites(unsigned seed) {
    const Tolerance tol{};

    CheckResult kernels{"numkit-kernel-pseudoinverse-suite", false, 0.0,
                        "500 random matrices up to 8x8"};
    {
        std::mt19937 rng(seed + 100);
        double worst = 0.0;
        bool ok = true;
        for (int trial = 0; trial < 500; ++trial) {
            const int m = 1 + static_cast<int>(rng() % 8);
            const int n = 1 + static_cast<int>(rng() % 8);
            const int r = static_cast<int>(rng() % static_cast<unsigned>(std::min(m, n) + 1));
            const Matrix M = r == 0 ? Matrix::Zero(m, n)
                                    : Matrix(random_matrix(rng, m, r) * random_matrix(rng, r, n));
            const int rank = numkit::rank_of(M, tol);
            if (rank != r) ok = false;
            const Matrix N = numkit::kernel_onb(M, tol);
            if (N.cols() != n - rank) ok = false;
            worst = std::max(worst, numkit::inf_norm(M * N));
            worst = std::max(worst, numkit::inf_norm(N.transpose() * N -
                                                     Matrix::Identity(N.cols(), N.cols())));
            if (rank == m) {
                const Matrix R = numkit::right_inverse(M, tol);
                worst = std::max(worst, numkit::inf_norm(M * R - Matrix::Identity(m, m)));
            }
            const Vector b = M * random_vector(rng, n);
            const auto ls = numkit::min_norm_solve(M, b, tol);
            if (!ls.feasible) ok = false;
            worst = std::max(worst, numkit::inf_norm(M * ls.solution - b));
        }
        kernels.metric = worst;
        kernels.pass = ok && worst <= 1e-8;
    }

    CheckResult identity{"identity-refinement-suite", false, 0.0,
                         "20 well-posed pairs, 50 steps"};
    try {
        std::mt19937 rng(seed + 200);
        double worst = 0.0;
        bool ok = true;
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 3);
            const int p = std::min(n, 1 + static_cast<int>(rng() % 2));
            const int q = static_cast<int>(rng() % static_cast<unsigned>(p + 1));
            auto [sys, ctrl] = random_wellposed_pair(rng, n, p, q);
            const auto rc =
                refine_end_to_end(sys, sys, LinearStateMap{Matrix::Identity(n, n)}, ctrl);
            const Vector x0 = random_vector(rng, n);
            const auto direct = simulate_closed_loop(sys, ctrl, x0, 50);
            const auto [refined, z_path] = simulate_refined(sys, rc, x0, 50);
            const auto rep = compare_outputs(direct, refined, 1e-10);
            worst = std::max(worst, rep.max_output_dev);
            if (!rep.pass) ok = false;
        }
        identity.metric = worst;
        identity.pass = ok;
    } catch (const Error& e) {
        identity.detail = e.what();
    }

    CheckResult transitivity{"relation-transitivity-suite", false, 0.0,
                             "10 constructed extension triples"};
    try {
        std::mt19937 rng(seed + 300);
        bool ok = true;
        for (int trial = 0; trial < 10; ++trial) {
            const int n = 2 + static_cast<int>(rng() % 2);
            const int p = std::min(n, 1 + static_cast<int>(rng() % 2));
            const int q = static_cast<int>(rng() % static_cast<unsigned>(p + 1));
            const auto base = random_descriptor(rng, n, p, q);
            const auto mid = extend_system(rng, base, 1 + static_cast<int>(rng() % 2));
            const auto top = extend_system(rng, mid.sys, 1 + static_cast<int>(rng() % 2));
            if (!check_simulation(base, mid.sys, LinearStateMap{mid.H}, tol).verdict) ok = false;
            if (!check_simulation(mid.sys, top.sys, LinearStateMap{top.H}, tol).verdict)
                ok = false;
            const Matrix composed = mid.H * top.H;
            if (!check_simulation(base, top.sys, LinearStateMap{composed}, tol).verdict)
                ok = false;
        }
        transitivity.pass = ok;
    } catch (const Error& e) {
        transitivity.detail = e.what();
    }

    return {kernels, identity, transitivity};
}

std::vector<CheckResult> run_all(const Tolerance& tol, unsigned seed, double bound) {
    auto all = run_reference_checks(tol, seed, bound);
    for (auto& extra : run_property_suites(seed)) all.push_back(std::move(extra));
    return all;
}

}  // namespace dsrefine::selftest
