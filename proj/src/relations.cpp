#include "dsrefine/relations.hpp"

#include "dsrefine/jsonio.hpp"

namespace dsrefine {

namespace {

/// Exact containment of the affine image {H*c + H*diag(half)*lambda} in a box.
bool box_image_in_box(const Matrix& H, const Vector& lo_src, const Vector& hi_src,
                      const Vector& lo_dst, const Vector& hi_dst, double slack) {
    const Vector mid = 0.5 * (lo_src + hi_src);
    const Vector half = 0.5 * (hi_src - lo_src);
    for (Eigen::Index i = 0; i < H.rows(); ++i) {
        const double center = H.row(i).dot(mid);
        double radius = 0.0;
        for (Eigen::Index j = 0; j < H.cols(); ++j) radius += std::abs(H(i, j)) * half(j);
        if (center - radius < lo_dst(i) - slack || center + radius > hi_dst(i) + slack)
            return false;
    }
    return true;
}

/// Generators of the linear span of the set (kinds with one).
Matrix span_generators(const InitialSet& s) {
    if (s.kind == InitialSetKind::FullSpace)
        return Matrix::Identity(s.dim, s.dim);
    return s.basis;
}

bool is_span_kind(const InitialSet& s) {
    return s.kind == InitialSetKind::FullSpace || s.kind == InitialSetKind::SubspaceSpan;
}

std::string kind_name(const InitialSet& s) {
    switch (s.kind) {
        case InitialSetKind::FullSpace: return "full";
        case InitialSetKind::SubspaceSpan: return "subspace";
        case InitialSetKind::Box: return "box";
        case InitialSetKind::Points: return "points";
    }
    return "?";
}

}  // namespace

SimulationReport check_simulation(const DescriptorSystem& abs, const DescriptorSystem& conc,
                                  const LinearStateMap& rel, const Tolerance& tol) {
    if (rel.abstract_dim() != abs.n() || rel.concrete_dim() != conc.n())
        throw DimensionMismatch("check_simulation: H is " + std::to_string(rel.H.rows()) + "x" +
                                std::to_string(rel.H.cols()) + ", expected " +
                                std::to_string(abs.n()) + "x" + std::to_string(conc.n()));
    if (abs.k() != conc.k())
        throw DimensionMismatch("check_simulation: output dimensions differ (" +
                                std::to_string(abs.k()) + " vs " + std::to_string(conc.k()) +
                                ")");
    const DrivingVariableSystem adv = to_dv(abs, tol);
    const DrivingVariableSystem cdv = to_dv(conc, tol);
    SimulationReport rep;
    rep.output_match = numkit::inf_norm(abs.C * rel.H - conc.C) <= tol.residual_atol;
    rep.drift = adv.Ad * rel.H - rel.H * cdv.Ad;
    const Matrix HBd = rel.H * cdv.Bd;
    rep.step_match = numkit::image_contained(rep.drift, HBd, tol) &&
                     numkit::image_contained(adv.Bd, HBd, tol);
    rep.initial_cover = check_initial_cover(abs.init, conc.init, rel, tol);
    rep.verdict = rep.output_match && rep.step_match && rep.initial_cover;
    return rep;
}

bool check_initial_cover(const InitialSet& abs_init, const InitialSet& conc_init,
                         const LinearStateMap& rel, const Tolerance& tol) {
    if (rel.abstract_dim() != abs_init.dim || rel.concrete_dim() != conc_init.dim)
        throw DimensionMismatch("check_initial_cover: H dimensions do not match the sets");
    if (abs_init.kind == InitialSetKind::FullSpace) return true;
    if (conc_init.kind == InitialSetKind::Points) {
        for (const auto& pt : conc_init.points)
            if (!abs_init.contains(rel.H * pt, tol)) return false;
        return true;
    }
    if (conc_init.kind == InitialSetKind::Box && abs_init.kind == InitialSetKind::Box)
        return box_image_in_box(rel.H, conc_init.lower, conc_init.upper, abs_init.lower,
                                abs_init.upper, tol.residual_atol);
    if (is_span_kind(conc_init) && abs_init.kind == InitialSetKind::SubspaceSpan)
        return numkit::image_contained(rel.H * span_generators(conc_init), abs_init.basis, tol);
    throw UnsupportedCombination("check_initial_cover: no exact test for concrete '" +
                                 kind_name(conc_init) + "' inside abstract '" +
                                 kind_name(abs_init) + "'");
}

bool check_init_simulated(const InitialSet& abs_init, const InitialSet& conc_init,
                          const LinearStateMap& rel, const Tolerance& tol) {
    if (rel.abstract_dim() != abs_init.dim || rel.concrete_dim() != conc_init.dim)
        throw DimensionMismatch("check_init_simulated: H dimensions do not match the sets");
    if (conc_init.kind == InitialSetKind::Box)
        throw UnsupportedCombination("check_init_simulated: no exact test for a box-valued "
                                     "concrete initial set");

    if (conc_init.kind == InitialSetKind::Points) {
        // The image of the concrete points is finite; only degenerate
        // abstract sets can be covered by it.
        auto image_has = [&](const Vector& target) {
            for (const auto& pt : conc_init.points)
                if (numkit::inf_norm(rel.H * pt - target) <= tol.residual_atol) return true;
            return false;
        };
        switch (abs_init.kind) {
            case InitialSetKind::Points:
                for (const auto& target : abs_init.points)
                    if (!image_has(target)) return false;
                return true;
            case InitialSetKind::FullSpace:
                return abs_init.dim == 0;
            case InitialSetKind::SubspaceSpan:
                return numkit::rank_of(abs_init.basis, tol) == 0 &&
                       image_has(Vector::Zero(abs_init.dim));
            case InitialSetKind::Box: {
                if (numkit::inf_norm(abs_init.upper - abs_init.lower) > tol.residual_atol)
                    return false;
                return image_has(abs_init.lower);
            }
        }
        return false;
    }

    // Concrete set is a span; its image under H is the span of H*generators.
    const Matrix image = rel.H * span_generators(conc_init);
    switch (abs_init.kind) {
        case InitialSetKind::FullSpace:
            return numkit::rank_of(image, tol) == abs_init.dim;
        case InitialSetKind::SubspaceSpan:
            return numkit::image_contained(abs_init.basis, image, tol);
        case InitialSetKind::Points:
            for (const auto& pt : abs_init.points)
                if (!numkit::min_norm_solve(image, pt, tol).feasible) return false;
            return true;
        case InitialSetKind::Box: {
            // A box lies in a subspace iff its center and every axis
            // direction of positive width do.
            const Vector mid = 0.5 * (abs_init.lower + abs_init.upper);
            if (!numkit::min_norm_solve(image, mid, tol).feasible) return false;
            for (Eigen::Index j = 0; j < mid.size(); ++j) {
                const double half = 0.5 * (abs_init.upper(j) - abs_init.lower(j));
                if (half <= tol.residual_atol) continue;
                Vector axis = Vector::Zero(mid.size());
                axis(j) = half;
                if (!numkit::min_norm_solve(image, axis, tol).feasible) return false;
            }
            return true;
        }
    }
    return false;
}

InterfaceMap synthesize_interface(const DrivingVariableSystem& abs_dv,
                                  const DrivingVariableSystem& conc_dv,
                                  const LinearStateMap& rel, const Tolerance& tol) {
    if (rel.abstract_dim() != abs_dv.n() || rel.concrete_dim() != conc_dv.n())
        throw DimensionMismatch("synthesize_interface: H dimensions do not match the systems");
    InterfaceMap iface;
    iface.drift = abs_dv.Ad * rel.H - rel.H * conc_dv.Ad;
    iface.Bda = abs_dv.Bd;
    const Matrix HBd = rel.H * conc_dv.Bd;
    // Minimum-norm solve of HBd * G = I gives the pseudoinverse; correctness
    // is certified directionwise below, not by this residual.
    iface.G = numkit::min_norm_solve(HBd, Matrix::Identity(HBd.rows(), HBd.rows()), tol).solution;
    const Matrix targets = numkit::hcat(iface.drift, iface.Bda);
    for (Eigen::Index j = 0; j < targets.cols(); ++j) {
        const double residual =
            numkit::inf_norm(HBd * (iface.G * targets.col(j)) - targets.col(j));
        if (residual > tol.residual_atol)
            throw Infeasible("synthesize_interface: abstract step direction " +
                             std::to_string(j) + " cannot be matched through the relation "
                             "(residual " + std::to_string(residual) + ")");
    }
    return iface;
}

LinearStateMap load_relation(const std::string& path) {
    namespace jio = jsonio;
    const jio::json j = jio::load_file(path);
    return LinearStateMap{jio::matrix_from_json(jio::require_field(j, path, "H"), path, "H")};
}

void save_relation(const LinearStateMap& rel, const std::string& path) {
    namespace jio = jsonio;
    jio::json j;
    j["H"] = jio::matrix_to_json(rel.H);
    jio::write_file(j, path);
}

}  // namespace dsrefine
