#pragma once

#include <stdexcept>
#include <string>

namespace dsrefine {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Incompatible matrix/vector dimensions.
class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

/// Malformed input file; carries the file path and the offending field.
class ParseError : public Error {
public:
    ParseError(const std::string& path, const std::string& field, const std::string& what)
        : Error(path + ": field '" + field + "': " + what), path_(path), field_(field) {}

    const std::string& path() const { return path_; }
    const std::string& field() const { return field_; }

private:
    std::string path_;
    std::string field_;
};

/// A full-row-rank precondition failed.
class RankDeficient : public Error {
public:
    explicit RankDeficient(const std::string& what) : Error(what) {}
};

/// The stacked state/input matrix of a system lacks full row rank, so the
/// driving-variable parametrisation does not exist.
class Assumption1Violated : public Error {
public:
    explicit Assumption1Violated(const std::string& what) : Error(what) {}
};

/// A (state, input, next state) triple does not satisfy the system dynamics.
class NotATransition : public Error {
public:
    explicit NotATransition(const std::string& what) : Error(what) {}
};

/// Which of the two well-posedness rank conditions failed.
enum class WellPosednessFailure {
    existence,  ///< solvability rank equality fails
    uniqueness  ///< stacked rank is below state + input dimension
};

/// A controller/plant interconnection is not well posed.
class NotWellPosed : public Error {
public:
    NotWellPosed(WellPosednessFailure which, const std::string& what)
        : Error(what), which_(which) {}

    WellPosednessFailure which() const { return which_; }

private:
    WellPosednessFailure which_;
};

/// Interface synthesis cannot match abstract steps through the relation.
class Infeasible : public Error {
public:
    explicit Infeasible(const std::string& what) : Error(what) {}
};

/// A candidate simulation relation was rejected by the checker.
class RelationRejected : public Error {
public:
    explicit RelationRejected(const std::string& what) : Error(what) {}
};

/// An implicit step equation has no solution within tolerance.
class NoSolution : public Error {
public:
    explicit NoSolution(const std::string& what, long time_index = -1)
        : Error(what), time_index_(time_index) {}

    long time_index() const { return time_index_; }

private:
    long time_index_;
};

/// An implicit step equation has multiple solutions.
class NonUnique : public Error {
public:
    explicit NonUnique(const std::string& what, long time_index = -1)
        : Error(what), time_index_(time_index) {}

    long time_index() const { return time_index_; }

private:
    long time_index_;
};

/// A simulation start state lies outside the declared initial set.
class InitialStateOutsideSet : public Error {
public:
    explicit InitialStateOutsideSet(const std::string& what) : Error(what) {}
};

/// No exact decision procedure exists for this pair of initial-set kinds.
class UnsupportedCombination : public Error {
public:
    explicit UnsupportedCombination(const std::string& what) : Error(what) {}
};

}  // namespace dsrefine
