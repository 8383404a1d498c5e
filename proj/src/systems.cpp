#include "dsrefine/systems.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dsrefine/jsonio.hpp"

namespace dsrefine {

namespace {

std::string dims(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

InitialSet InitialSet::full_space(int dim) {
    if (dim < 0) throw DimensionMismatch("initial set: negative dimension");
    InitialSet s;
    s.kind = InitialSetKind::FullSpace;
    s.dim = dim;
    return s;
}

InitialSet InitialSet::subspace(const Matrix& basis) {
    InitialSet s;
    s.kind = InitialSetKind::SubspaceSpan;
    s.dim = static_cast<int>(basis.rows());
    s.basis = basis;
    return s;
}

InitialSet InitialSet::box(const Vector& lower, const Vector& upper) {
    if (lower.size() != upper.size())
        throw DimensionMismatch("initial set box: bound lengths differ");
    for (Eigen::Index i = 0; i < lower.size(); ++i)
        if (lower(i) > upper(i))
            throw DimensionMismatch("initial set box: lower bound exceeds upper at index " +
                                    std::to_string(i));
    InitialSet s;
    s.kind = InitialSetKind::Box;
    s.dim = static_cast<int>(lower.size());
    s.lower = lower;
    s.upper = upper;
    return s;
}

InitialSet InitialSet::point_list(std::vector<Vector> pts) {
    if (pts.empty()) throw DimensionMismatch("initial set points: empty list");
    InitialSet s;
    s.kind = InitialSetKind::Points;
    s.dim = static_cast<int>(pts.front().size());
    for (const auto& p : pts)
        if (p.size() != s.dim)
            throw DimensionMismatch("initial set points: inconsistent point lengths");
    s.points = std::move(pts);
    return s;
}

bool InitialSet::contains(const Vector& x, const Tolerance& tol) const {
    if (x.size() != dim)
        throw DimensionMismatch("initial set contains: vector length " +
                                std::to_string(x.size()) + ", set dimension " +
                                std::to_string(dim));
    switch (kind) {
        case InitialSetKind::FullSpace:
            return true;
        case InitialSetKind::SubspaceSpan:
            return numkit::min_norm_solve(basis, x, tol).feasible;
        case InitialSetKind::Box:
            for (Eigen::Index i = 0; i < x.size(); ++i)
                if (x(i) < lower(i) - tol.residual_atol || x(i) > upper(i) + tol.residual_atol)
                    return false;
            return true;
        case InitialSetKind::Points:
            for (const auto& p : points)
                if (numkit::inf_norm(x - p) <= tol.residual_atol) return true;
            return false;
    }
    return false;
}

Vector InitialSet::sample(std::mt19937& rng, long index) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    switch (kind) {
        case InitialSetKind::FullSpace: {
            Vector x(dim);
            for (int i = 0; i < dim; ++i) x(i) = normal(rng);
            return x;
        }
        case InitialSetKind::SubspaceSpan: {
            Vector c(basis.cols());
            for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = normal(rng);
            return basis * c;
        }
        case InitialSetKind::Box: {
            Vector x(dim);
            for (int i = 0; i < dim; ++i) {
                std::uniform_real_distribution<double> uni(lower(i), upper(i));
                x(i) = lower(i) == upper(i) ? lower(i) : uni(rng);
            }
            return x;
        }
        case InitialSetKind::Points:
            return points[static_cast<std::size_t>(index) % points.size()];
    }
    return Vector::Zero(dim);
}

DescriptorSystem::DescriptorSystem(Matrix E_, Matrix A_, Matrix B_, Matrix C_, InitialSet init_)
    : E(std::move(E_)), A(std::move(A_)), B(std::move(B_)), C(std::move(C_)),
      init(std::move(init_)) {
    if (E.rows() != E.cols())
        throw DimensionMismatch("descriptor system: E must be square, got " + dims(E));
    if (A.rows() != E.rows() || A.cols() != E.cols())
        throw DimensionMismatch("descriptor system: A is " + dims(A) + ", E is " + dims(E));
    if (B.rows() != E.rows())
        throw DimensionMismatch("descriptor system: B has " + std::to_string(B.rows()) +
                                " rows, state dimension is " + std::to_string(E.rows()));
    if (C.cols() != E.rows())
        throw DimensionMismatch("descriptor system: C has " + std::to_string(C.cols()) +
                                " columns, state dimension is " + std::to_string(E.rows()));
    if (init.dim != n())
        throw DimensionMismatch("descriptor system: initial set dimension " +
                                std::to_string(init.dim) + ", state dimension " +
                                std::to_string(n()));
}

Matrix DescriptorSystem::stacked() const { return numkit::hcat(E, -B); }

Controller::Controller(Matrix Ec_, Matrix Ac_, Matrix Bc_)
    : Ec(std::move(Ec_)), Ac(std::move(Ac_)), Bc(std::move(Bc_)) {
    if (Ac.rows() != Ec.rows() || Bc.rows() != Ec.rows())
        throw DimensionMismatch("controller: row counts differ (Ec " + dims(Ec) + ", Ac " +
                                dims(Ac) + ", Bc " + dims(Bc) + ")");
}

ValidationReport validate(const DescriptorSystem& sys, const Tolerance& tol) {
    ValidationReport rep;
    const int p = sys.p();
    const int k = sys.k();
    rep.rank_B_ok = numkit::rank_of(sys.B, tol) == p;
    rep.rank_C_ok = numkit::rank_of(sys.C, tol) == k;
    rep.assumption1_ok = numkit::rank_of(sys.stacked(), tol) == sys.n();
    if (!rep.rank_B_ok)
        rep.messages.push_back("input matrix B is column-rank deficient (rank " +
                               std::to_string(numkit::rank_of(sys.B, tol)) + " of " +
                               std::to_string(p) + ")");
    if (!rep.rank_C_ok)
        rep.messages.push_back("output matrix C is row-rank deficient (rank " +
                               std::to_string(numkit::rank_of(sys.C, tol)) + " of " +
                               std::to_string(k) + ")");
    if (!rep.assumption1_ok)
        rep.messages.push_back("[E -B] lacks full row rank; the driving-variable form "
                               "does not exist");
    return rep;
}

double membership_residual(const DescriptorSystem& sys, const Trajectory& traj) {
    const std::size_t T = static_cast<std::size_t>(traj.horizon);
    if (traj.x.size() != T + 1 || traj.y.size() != T + 1 || traj.u.size() != T)
        throw DimensionMismatch("membership_residual: signal lengths do not match horizon " +
                                std::to_string(traj.horizon));
    double worst = 0.0;
    for (std::size_t t = 0; t <= T; ++t) {
        if (traj.x[t].size() != sys.n() || traj.y[t].size() != sys.k())
            throw DimensionMismatch("membership_residual: state/output length mismatch at t=" +
                                    std::to_string(t));
        worst = std::max(worst, numkit::inf_norm(traj.y[t] - sys.C * traj.x[t]));
        if (t < T) {
            if (traj.u[t].size() != sys.p())
                throw DimensionMismatch("membership_residual: input length mismatch at t=" +
                                        std::to_string(t));
            worst = std::max(worst, numkit::inf_norm(sys.E * traj.x[t + 1] - sys.A * traj.x[t] -
                                                     sys.B * traj.u[t]));
        }
    }
    return worst;
}

DescriptorSystem load_system(const std::string& path) {
    namespace jio = jsonio;
    const jio::json j = jio::load_file(path);
    const Matrix E = jio::matrix_from_json(jio::require_field(j, path, "E"), path, "E");
    const int n = static_cast<int>(E.rows());
    const Matrix A = jio::matrix_from_json(jio::require_field(j, path, "A"), path, "A");
    const Matrix B = jio::matrix_from_json(jio::require_field(j, path, "B"), path, "B");
    const Matrix C = jio::matrix_from_json(jio::require_field(j, path, "C"), path, "C", n);
    InitialSet init = j.contains("init") ? jio::init_from_json(j.at("init"), n, path)
                                         : InitialSet::full_space(n);
    return DescriptorSystem(E, A, B, C, std::move(init));
}

void save_system(const DescriptorSystem& sys, const std::string& path) {
    namespace jio = jsonio;
    jio::json j;
    j["E"] = jio::matrix_to_json(sys.E);
    j["A"] = jio::matrix_to_json(sys.A);
    j["B"] = jio::matrix_to_json(sys.B);
    j["C"] = jio::matrix_to_json(sys.C);
    j["init"] = jio::init_to_json(sys.init);
    jio::write_file(j, path);
}

Controller load_controller(const std::string& path) {
    namespace jio = jsonio;
    const jio::json j = jio::load_file(path);
    const Matrix Ec = jio::matrix_from_json(jio::require_field(j, path, "Ec"), path, "Ec");
    const Matrix Ac = jio::matrix_from_json(jio::require_field(j, path, "Ac"), path, "Ac",
                                            static_cast<int>(Ec.cols()));
    const Matrix Bc = jio::matrix_from_json(jio::require_field(j, path, "Bc"), path, "Bc");
    return Controller(Ec, Ac, Bc);
}

void save_controller(const Controller& ctrl, const std::string& path) {
    namespace jio = jsonio;
    jio::json j;
    j["Ec"] = jio::matrix_to_json(ctrl.Ec);
    j["Ac"] = jio::matrix_to_json(ctrl.Ac);
    j["Bc"] = jio::matrix_to_json(ctrl.Bc);
    jio::write_file(j, path);
}

std::string trajectory_to_csv(const Trajectory& traj) {
    const std::size_t T = static_cast<std::size_t>(traj.horizon);
    const Eigen::Index p = traj.u.empty() ? 0 : traj.u.front().size();
    const Eigen::Index n = traj.x.empty() ? 0 : traj.x.front().size();
    const Eigen::Index k = traj.y.empty() ? 0 : traj.y.front().size();
    std::ostringstream out;
    out.precision(std::numeric_limits<double>::max_digits10);
    out << "t";
    for (Eigen::Index i = 1; i <= p; ++i) out << ",u" << i;
    for (Eigen::Index i = 1; i <= n; ++i) out << ",x" << i;
    for (Eigen::Index i = 1; i <= k; ++i) out << ",y" << i;
    out << "\n";
    for (std::size_t t = 0; t <= T; ++t) {
        out << t;
        for (Eigen::Index i = 0; i < p; ++i) {
            out << ",";
            if (t < T) out << traj.u[t](i);
        }
        for (Eigen::Index i = 0; i < n; ++i) out << "," << traj.x[t](i);
        for (Eigen::Index i = 0; i < k; ++i) out << "," << traj.y[t](i);
        out << "\n";
    }
    return out.str();
}

void save_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    f << trajectory_to_csv(traj);
}

}  // namespace dsrefine
