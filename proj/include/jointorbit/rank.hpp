#pragma once

#include "jointorbit/joint_matrix.hpp"

#include <vector>

namespace jointorbit {

struct RankReport {
    int rank = 0;
    Backend backend = Backend::Float;
    double tol = 0.0;                 // float path; 0 on the exact path
    std::vector<double> spectrum;     // float path: singular values, descending
    double gap_ratio = 0.0;           // smallest accepted / largest rejected; inf if none rejected
    long long exact_pivots = 0;       // exact path: pivots found (equals rank)
};

/// rank = #{ singular values > tol * sigma_max }; sigma_max == 0 gives rank 0.
/// Throws NumericError on non-finite entries.
RankReport numeric_rank(const JointMatrix& mat, double tol);

/// Fraction-free Gaussian elimination over the rationals; tolerance-free.
/// Throws BackendError unless the matrix carries exact entries.
RankReport exact_rank(const JointMatrix& mat);

/// Dispatch on the matrix backend.
RankReport matrix_rank(const JointMatrix& mat, double tol);

/// Determinant of a square matrix.
double det_float(const JointMatrix& mat);
Rational det_exact(const JointMatrix& mat);

/// Basis of { c : A c = 0 } for a rows x cols rational matrix (row major).
std::vector<std::vector<Rational>> exact_nullspace(const std::vector<Rational>& a, int rows,
                                                   int cols);

/// Rank of a raw rational matrix (row major), same elimination as exact_rank.
int exact_rank_raw(const std::vector<Rational>& a, int rows, int cols);

/// Right-singular vector for the smallest singular value when that value is
/// <= tol * sigma_max; empty vector otherwise (matrix has full column rank).
std::vector<double> float_null_vector(const std::vector<double>& a, int rows, int cols,
                                      double tol);

} // namespace jointorbit
