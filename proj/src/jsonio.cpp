#include "dsrefine/jsonio.hpp"

#include <fstream>

namespace dsrefine::jsonio {

json load_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(path, "(file)", "cannot open for reading");
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw ParseError(path, "(file)", e.what());
    }
}

void write_file(const json& j, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    f << j.dump(2) << "\n";
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index jx = 0; jx < m.cols(); ++jx) row.push_back(m(i, jx));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, const std::string& path, const std::string& field,
                        int expected_cols) {
    if (!j.is_array()) throw ParseError(path, field, "expected an array of rows");
    const auto nrows = static_cast<Eigen::Index>(j.size());
    if (nrows == 0) return Matrix(0, expected_cols >= 0 ? expected_cols : 0);
    if (!j.at(0).is_array()) throw ParseError(path, field + "[0]", "expected a row array");
    const auto ncols = static_cast<Eigen::Index>(j.at(0).size());
    Matrix m(nrows, ncols);
    for (Eigen::Index i = 0; i < nrows; ++i) {
        const json& row = j.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != ncols)
            throw ParseError(path, field + "[" + std::to_string(i) + "]",
                             "rows have inconsistent lengths");
        for (Eigen::Index c = 0; c < ncols; ++c) {
            const json& cell = row.at(static_cast<std::size_t>(c));
            if (!cell.is_number())
                throw ParseError(path,
                                 field + "[" + std::to_string(i) + "][" + std::to_string(c) + "]",
                                 "expected a number, got " + std::string(cell.type_name()));
            m(i, c) = cell.get<double>();
        }
    }
    return m;
}

const json& require_field(const json& j, const std::string& path, const std::string& field) {
    if (!j.contains(field)) throw ParseError(path, field, "missing required field");
    return j.at(field);
}

json init_to_json(const InitialSet& s) {
    json j;
    switch (s.kind) {
        case InitialSetKind::FullSpace:
            j["kind"] = "full";
            break;
        case InitialSetKind::SubspaceSpan:
            j["kind"] = "subspace";
            j["basis"] = matrix_to_json(s.basis);
            break;
        case InitialSetKind::Box: {
            j["kind"] = "box";
            json lo = json::array(), hi = json::array();
            for (Eigen::Index i = 0; i < s.lower.size(); ++i) {
                lo.push_back(s.lower(i));
                hi.push_back(s.upper(i));
            }
            j["lower"] = std::move(lo);
            j["upper"] = std::move(hi);
            break;
        }
        case InitialSetKind::Points: {
            j["kind"] = "points";
            json pts = json::array();
            for (const auto& p : s.points) {
                json row = json::array();
                for (Eigen::Index i = 0; i < p.size(); ++i) row.push_back(p(i));
                pts.push_back(std::move(row));
            }
            j["points"] = std::move(pts);
            break;
        }
    }
    return j;
}

namespace {

Vector vector_from_json(const json& j, const std::string& path, const std::string& field) {
    if (!j.is_array()) throw ParseError(path, field, "expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const json& cell = j.at(static_cast<std::size_t>(i));
        if (!cell.is_number())
            throw ParseError(path, field + "[" + std::to_string(i) + "]",
                             "expected a number, got " + std::string(cell.type_name()));
        v(i) = cell.get<double>();
    }
    return v;
}

}  // namespace

InitialSet init_from_json(const json& j, int dim, const std::string& path) {
    const json& kind = require_field(j, path, "kind");
    if (!kind.is_string()) throw ParseError(path, "init.kind", "expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "full") return InitialSet::full_space(dim);
    if (k == "subspace") {
        const Matrix basis =
            matrix_from_json(require_field(j, path, "basis"), path, "init.basis");
        if (basis.rows() != dim)
            throw DimensionMismatch("initial set basis has " + std::to_string(basis.rows()) +
                                    " rows, state dimension is " + std::to_string(dim));
        return InitialSet::subspace(basis);
    }
    if (k == "box") {
        const Vector lo = vector_from_json(require_field(j, path, "lower"), path, "init.lower");
        const Vector hi = vector_from_json(require_field(j, path, "upper"), path, "init.upper");
        if (lo.size() != dim)
            throw DimensionMismatch("initial set box bounds have length " +
                                    std::to_string(lo.size()) + ", state dimension is " +
                                    std::to_string(dim));
        return InitialSet::box(lo, hi);
    }
    if (k == "points") {
        const json& pts = require_field(j, path, "points");
        if (!pts.is_array() || pts.empty())
            throw ParseError(path, "init.points", "expected a nonempty array of points");
        std::vector<Vector> list;
        for (std::size_t i = 0; i < pts.size(); ++i)
            list.push_back(vector_from_json(pts.at(i), path,
                                            "init.points[" + std::to_string(i) + "]"));
        InitialSet s = InitialSet::point_list(std::move(list));
        if (s.dim != dim)
            throw DimensionMismatch("initial set points have length " + std::to_string(s.dim) +
                                    ", state dimension is " + std::to_string(dim));
        return s;
    }
    throw ParseError(path, "init.kind", "unknown kind '" + k + "'");
}

}  // namespace dsrefine::jsonio
