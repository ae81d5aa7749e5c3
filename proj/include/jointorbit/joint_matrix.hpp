#pragma once

#include "jointorbit/model.hpp"

#include <string>
#include <vector>

namespace jointorbit {

enum class Backend { Float, Exact };

const char* backend_name(Backend b);

/// Evaluation failure while filling a matrix; carries which generator (or
/// function) row and which tuple point was being evaluated.
struct MatrixEvalError : std::runtime_error {
    int row_index;
    int point_index;
    MatrixEvalError(const std::string& msg, int row, int point)
        : std::runtime_error("row " + std::to_string(row) + " at point " +
                             std::to_string(point) + ": " + msg),
          row_index(row), point_index(point) {}
};

/// The r x (n*block) matrix of generator coefficients (block = m) or of
/// function values (block = q), stacked point by point in declared
/// coordinate order. Row k, column block j holds row k evaluated at point j.
struct JointMatrix {
    int rows = 0;
    int cols = 0;
    int block = 0;
    Backend backend = Backend::Float;
    std::vector<double> a;       // row major, always filled
    std::vector<Rational> aq;    // row major, exact backend only
    std::string source;          // spec or family name
    PointTuple tuple;

    double at(int i, int j) const { return a[static_cast<std::size_t>(i * cols + j)]; }
    const Rational& atq(int i, int j) const {
        return aq[static_cast<std::size_t>(i * cols + j)];
    }
};

/// Picks the backend: forced when `force` is set (rejecting an impossible
/// request), otherwise exact iff the data is polynomial and the tuple
/// carries rationals.
Backend choose_backend(bool polynomial, bool tuple_exact, std::optional<bool> force);

JointMatrix lie_matrix(const ActionSpec& spec, const PointTuple& tuple, Backend backend);
JointMatrix wronskian_matrix(const FunctionFamily& fam, const PointTuple& tuple, Backend backend);

/// Shortest decimal that round-trips to the same double.
std::string format_shortest(double v);

/// CLI dump format: one row per line, entries space-separated, exact entries
/// as p/q, floats as shortest round-trip decimals.
std::string dump_matrix(const JointMatrix& mat);

} // namespace jointorbit
