#include "jointorbit/rank.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace jointorbit {

namespace {

Eigen::MatrixXd to_eigen(const std::vector<double>& a, int rows, int cols) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = a[static_cast<std::size_t>(i * cols + j)];
    return m;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

RankReport numeric_rank(const JointMatrix& mat, double tol) {
    if (!(tol > 0.0 && tol < 1.0)) throw NumericError("rank tolerance must lie in (0, 1)");
    for (double v : mat.a)
        if (!std::isfinite(v)) throw NumericError("non-finite matrix entry");
    Eigen::MatrixXd m = to_eigen(mat.a, mat.rows, mat.cols);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    RankReport rep;
    rep.backend = Backend::Float;
    rep.tol = tol;
    const auto& sv = svd.singularValues();
    rep.spectrum.assign(sv.data(), sv.data() + sv.size());
    const double smax = rep.spectrum.empty() ? 0.0 : rep.spectrum.front();
    if (smax == 0.0) {
        rep.rank = 0;
        rep.gap_ratio = kInf;
        return rep;
    }
    const double cut = tol * smax;
    int rank = 0;
    for (double s : rep.spectrum)
        if (s > cut) ++rank;
    rep.rank = rank;
    if (rank == static_cast<int>(rep.spectrum.size()) ||
        rep.spectrum[static_cast<std::size_t>(rank)] == 0.0)
        rep.gap_ratio = kInf;
    else
        rep.gap_ratio = rep.spectrum[static_cast<std::size_t>(rank - 1)] /
                        rep.spectrum[static_cast<std::size_t>(rank)];
    return rep;
}

// --------------------------------------------------------------------------
// exact elimination

namespace {

// Clears denominators row by row; rank and determinant-zero structure are
// unchanged by scaling rows with positive constants. Returns the row scales.
std::vector<BigInt> integerize(std::vector<BigInt>& out, const std::vector<Rational>& a,
                               int rows, int cols) {
    out.assign(static_cast<std::size_t>(rows * cols), BigInt(0));
    std::vector<BigInt> scales;
    scales.reserve(static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i) {
        BigInt l(1);
        for (int j = 0; j < cols; ++j) l = lcm(l, a[static_cast<std::size_t>(i * cols + j)].den());
        for (int j = 0; j < cols; ++j) {
            const Rational& v = a[static_cast<std::size_t>(i * cols + j)];
            out[static_cast<std::size_t>(i * cols + j)] = v.num() * l.divexact(v.den());
        }
        scales.push_back(std::move(l));
    }
    return scales;
}

struct BareissResult {
    int rank = 0;
    int sign = 1;             // row-swap parity
    BigInt last_pivot;        // the final pivot (determinant of the integer matrix
                              // when square and nonsingular)
    bool full_column_path = true; // no column was skipped before reaching full rank
};

// Fraction-free (Bareiss) elimination with row pivoting. Exact divisions by
// the previous pivot keep entries integral.
BareissResult bareiss(std::vector<BigInt>& m, int rows, int cols) {
    BareissResult res;
    auto at = [&m, cols](int i, int j) -> BigInt& {
        return m[static_cast<std::size_t>(i * cols + j)];
    };
    BigInt prev(1);
    int row = 0;
    for (int col = 0; col < cols && row < rows; ++col) {
        int piv = -1;
        for (int i = row; i < rows; ++i)
            if (!at(i, col).is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) {
            if (row < rows) res.full_column_path = false;
            continue;
        }
        if (piv != row) {
            for (int j = 0; j < cols; ++j) std::swap(at(piv, j), at(row, j));
            res.sign = -res.sign;
        }
        for (int i = row + 1; i < rows; ++i) {
            for (int j = col + 1; j < cols; ++j)
                at(i, j) = (at(row, col) * at(i, j) - at(i, col) * at(row, j)).divexact(prev);
            at(i, col) = BigInt(0);
        }
        prev = at(row, col);
        ++row;
    }
    res.rank = row;
    res.last_pivot = prev;
    return res;
}

} // namespace

int exact_rank_raw(const std::vector<Rational>& a, int rows, int cols) {
    if (rows == 0 || cols == 0) return 0;
    std::vector<BigInt> m;
    integerize(m, a, rows, cols);
    return bareiss(m, rows, cols).rank;
}

RankReport exact_rank(const JointMatrix& mat) {
    if (mat.backend != Backend::Exact)
        throw BackendError("exact_rank needs a matrix with exact entries");
    RankReport rep;
    rep.backend = Backend::Exact;
    rep.tol = 0.0;
    rep.rank = exact_rank_raw(mat.aq, mat.rows, mat.cols);
    rep.exact_pivots = rep.rank;
    rep.gap_ratio = kInf;
    return rep;
}

RankReport matrix_rank(const JointMatrix& mat, double tol) {
    return mat.backend == Backend::Exact ? exact_rank(mat) : numeric_rank(mat, tol);
}

double det_float(const JointMatrix& mat) {
    if (mat.rows != mat.cols) throw SpecError("determinant needs a square matrix");
    for (double v : mat.a)
        if (!std::isfinite(v)) throw NumericError("non-finite matrix entry");
    Eigen::MatrixXd m = to_eigen(mat.a, mat.rows, mat.cols);
    return m.determinant();
}

Rational det_exact(const JointMatrix& mat) {
    if (mat.backend != Backend::Exact)
        throw BackendError("det_exact needs a matrix with exact entries");
    if (mat.rows != mat.cols) throw SpecError("determinant needs a square matrix");
    if (mat.rows == 0) return Rational(1);
    std::vector<BigInt> m;
    std::vector<BigInt> scales = integerize(m, mat.aq, mat.rows, mat.cols);
    BareissResult res = bareiss(m, mat.rows, mat.cols);
    if (res.rank < mat.rows) return Rational(0);
    // det of the scaled integer matrix is the last pivot (times swap parity);
    // undo the per-row scaling
    BigInt denom(1);
    for (const BigInt& s : scales) denom = denom * s;
    Rational det(res.sign < 0 ? -res.last_pivot : res.last_pivot, denom);
    return det;
}

std::vector<std::vector<Rational>> exact_nullspace(const std::vector<Rational>& a, int rows,
                                                   int cols) {
    // plain Gauss-Jordan over rationals; matrices here are tiny
    std::vector<Rational> m = a;
    auto at = [&m, cols](int i, int j) -> Rational& {
        return m[static_cast<std::size_t>(i * cols + j)];
    };
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < cols && row < rows; ++col) {
        int piv = -1;
        for (int i = row; i < rows; ++i)
            if (!at(i, col).is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < cols; ++j) std::swap(at(piv, j), at(row, j));
        Rational inv = Rational(1) / at(row, col);
        for (int j = 0; j < cols; ++j) at(row, j) = at(row, j) * inv;
        for (int i = 0; i < rows; ++i) {
            if (i == row || at(i, col).is_zero()) continue;
            Rational f = at(i, col);
            for (int j = 0; j < cols; ++j) at(i, j) = at(i, j) - f * at(row, j);
        }
        pivot_col.push_back(col);
        ++row;
    }
    std::vector<std::vector<Rational>> basis;
    std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
    for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[static_cast<std::size_t>(free)]) continue;
        std::vector<Rational> v(static_cast<std::size_t>(cols), Rational(0));
        v[static_cast<std::size_t>(free)] = Rational(1);
        for (std::size_t k = 0; k < pivot_col.size(); ++k)
            v[static_cast<std::size_t>(pivot_col[k])] = -at(static_cast<int>(k), free);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<double> float_null_vector(const std::vector<double>& a, int rows, int cols,
                                      double tol) {
    Eigen::MatrixXd m = to_eigen(a, rows, cols);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return {};
    const double smax = sv(0);
    const double smin = static_cast<int>(sv.size()) == cols
                            ? sv(sv.size() - 1)
                            : 0.0; // fewer singular values than columns: rank-deficient
    if (smax > 0.0 && smin > tol * smax) return {};
    Eigen::VectorXd v = svd.matrixV().col(cols - 1);
    return std::vector<double>(v.data(), v.data() + v.size());
}

} // namespace jointorbit
