#include "dsrefine/dvtransform.hpp"

#include <random>

#include "dsrefine/jsonio.hpp"

namespace dsrefine {

Matrix DrivingVariableSystem::kernel_basis() const { return numkit::vcat(Bd, Du); }

Matrix DrivingVariableSystem::particular_map() const { return numkit::vcat(Ad, Cu); }

DrivingVariableSystem to_dv(const DescriptorSystem& sys, const Tolerance& tol) {
    const Matrix M = sys.stacked();
    if (numkit::rank_of(M, tol) < sys.n())
        throw Assumption1Violated("to_dv: [E -B] has rank " +
                                  std::to_string(numkit::rank_of(M, tol)) + " < " +
                                  std::to_string(sys.n()));
    const Matrix particular = numkit::right_inverse(M, tol) * sys.A;
    const Matrix N = numkit::kernel_onb(M, tol);
    DrivingVariableSystem dv;
    dv.Ad = particular.topRows(sys.n());
    dv.Cu = particular.bottomRows(sys.p());
    dv.Bd = N.topRows(sys.n());
    dv.Du = N.bottomRows(sys.p());
    dv.C = sys.C;
    dv.init = sys.init;
    return dv;
}

bool check_dv_consistency(const DescriptorSystem& sys, const DrivingVariableSystem& dv,
                          const Tolerance& tol) {
    if (dv.n() != sys.n() || dv.p() != sys.p() || dv.Ad.cols() != sys.n() ||
        dv.Cu.cols() != sys.n() || dv.Du.cols() != dv.ps() || dv.C.rows() != sys.k() ||
        dv.C.cols() != sys.n())
        throw DimensionMismatch("check_dv_consistency: dimension mismatch between the "
                                "descriptor system and the driving-variable form");
    const Matrix M = sys.stacked();
    const Matrix N = dv.kernel_basis();
    if (numkit::inf_norm(M * dv.particular_map() - sys.A) > tol.residual_atol) return false;
    if (N.cols() > 0 && numkit::inf_norm(M * N) > tol.residual_atol) return false;
    if (N.cols() > 0 &&
        numkit::inf_norm(N.transpose() * N - Matrix::Identity(N.cols(), N.cols())) >
            tol.residual_atol)
        return false;
    const int kernel_dim = sys.n() + sys.p() - numkit::rank_of(M, tol);
    return dv.ps() == kernel_dim;
}

Vector recover_driving_input(const DescriptorSystem& sys, const Vector& x, const Vector& u,
                             const Vector& x_next, const Tolerance& tol) {
    if (x.size() != sys.n() || x_next.size() != sys.n() || u.size() != sys.p())
        throw DimensionMismatch("recover_driving_input: vector lengths do not match the system");
    const double step_residual =
        numkit::inf_norm(sys.E * x_next - sys.A * x - sys.B * u);
    if (step_residual > tol.residual_atol)
        throw NotATransition("recover_driving_input: step equation residual " +
                             std::to_string(step_residual) + " exceeds tolerance");
    const DrivingVariableSystem dv = to_dv(sys, tol);
    Vector stacked(sys.n() + sys.p());
    stacked.head(sys.n()) = x_next;
    stacked.tail(sys.p()) = u;
    return dv.kernel_basis().transpose() * (stacked - dv.particular_map() * x);
}

namespace {

Vector uniform_vector(std::mt19937& rng, int len) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector v(len);
    for (int i = 0; i < len; ++i) v(i) = dist(rng);
    return v;
}

}  // namespace

bool verify_ds_dv_equivalence(const DescriptorSystem& sys, const DrivingVariableSystem& dv,
                              int horizon, int samples, unsigned seed, const Tolerance& tol) {
    if (!check_dv_consistency(sys, dv, tol)) return false;
    std::mt19937 rng(seed);
    const Matrix N = dv.kernel_basis();
    const Matrix canonical = to_dv(sys, tol).particular_map();
    for (int i = 0; i < samples; ++i) {
        // DV trajectory -> descriptor behaviour membership.
        Trajectory traj;
        traj.horizon = horizon;
        Vector x = sys.init.sample(rng, i);
        traj.x.push_back(x);
        traj.y.push_back(dv.C * x);
        for (int t = 0; t < horizon; ++t) {
            const Vector s = uniform_vector(rng, dv.ps());
            traj.u.push_back(dv.Cu * x + dv.Du * s);
            x = dv.Ad * x + dv.Bd * s;
            traj.x.push_back(x);
            traj.y.push_back(dv.C * x);
        }
        if (membership_residual(sys, traj) > tol.residual_atol) return false;

        // Descriptor transition chain -> reproduced by the DV.
        Vector xs = sys.init.sample(rng, i);
        for (int t = 0; t < horizon; ++t) {
            const Vector s_gen = uniform_vector(rng, dv.ps());
            const Vector pair = canonical * xs + N * s_gen;
            const Vector x_next = pair.head(sys.n());
            const Vector u = pair.tail(sys.p());
            Vector stacked(sys.n() + sys.p());
            stacked.head(sys.n()) = x_next;
            stacked.tail(sys.p()) = u;
            const Vector s_rec = N.transpose() * (stacked - dv.particular_map() * xs);
            const Vector reproduced = dv.particular_map() * xs + N * s_rec;
            if (numkit::inf_norm(reproduced - stacked) > tol.residual_atol) return false;
            xs = x_next;
        }
    }
    return true;
}

DrivingVariableSystem load_dv(const std::string& path) {
    namespace jio = jsonio;
    const jio::json j = jio::load_file(path);
    DrivingVariableSystem dv;
    dv.Ad = jio::matrix_from_json(jio::require_field(j, path, "Ad"), path, "Ad");
    const int n = static_cast<int>(dv.Ad.rows());
    dv.Bd = jio::matrix_from_json(jio::require_field(j, path, "Bd"), path, "Bd");
    dv.Cu = jio::matrix_from_json(jio::require_field(j, path, "Cu"), path, "Cu", n);
    dv.Du = jio::matrix_from_json(jio::require_field(j, path, "Du"), path, "Du",
                                  static_cast<int>(dv.Bd.cols()));
    dv.C = jio::matrix_from_json(jio::require_field(j, path, "C"), path, "C", n);
    dv.init = j.contains("init") ? jio::init_from_json(j.at("init"), n, path)
                                 : InitialSet::full_space(n);
    if (dv.Ad.cols() != n || dv.Bd.rows() != n || dv.Cu.cols() != n ||
        dv.Du.rows() != dv.Cu.rows() || dv.C.cols() != n)
        throw DimensionMismatch("driving-variable file '" + path + "': inconsistent dimensions");
    return dv;
}

void save_dv(const DrivingVariableSystem& dv, const std::string& path) {
    namespace jio = jsonio;
    jio::json j;
    j["Ad"] = jio::matrix_to_json(dv.Ad);
    j["Bd"] = jio::matrix_to_json(dv.Bd);
    j["Cu"] = jio::matrix_to_json(dv.Cu);
    j["Du"] = jio::matrix_to_json(dv.Du);
    j["C"] = jio::matrix_to_json(dv.C);
    j["init"] = jio::init_to_json(dv.init);
    jio::write_file(j, path);
}

}  // namespace dsrefine
