#include "jointorbit/joint_matrix.hpp"

#include <charconv>

namespace jointorbit {

const char* backend_name(Backend b) { return b == Backend::Float ? "float" : "exact"; }

Backend choose_backend(bool polynomial, bool tuple_exact, std::optional<bool> force) {
    if (force.has_value()) {
        if (*force) {
            if (!polynomial) throw BackendError("exact backend requires polynomial expressions");
            if (!tuple_exact) throw BackendError("exact backend requires rational points");
            return Backend::Exact;
        }
        return Backend::Float;
    }
    return (polynomial && tuple_exact) ? Backend::Exact : Backend::Float;
}

namespace {

template <typename RowAccess>
JointMatrix build(int rows, int block, Backend backend, const PointTuple& tuple,
                  std::string source, const RowAccess& expr_at) {
    JointMatrix mat;
    mat.rows = rows;
    mat.block = block;
    mat.cols = tuple.order() * block;
    mat.backend = backend;
    mat.source = std::move(source);
    mat.tuple = tuple;
    mat.a.assign(static_cast<std::size_t>(mat.rows * mat.cols), 0.0);
    if (backend == Backend::Exact) {
        if (!tuple.has_exact()) throw BackendError("exact backend requires rational points");
        mat.aq.assign(static_cast<std::size_t>(mat.rows * mat.cols), Rational(0));
    }
    const int n = tuple.order();
    for (int k = 0; k < rows; ++k) {
        for (int j = 0; j < n; ++j) {
            for (int l = 0; l < block; ++l) {
                const Expr& e = expr_at(k, l);
                const int col = j * block + l;
                try {
                    if (backend == Backend::Exact) {
                        Rational v = e.eval_exact((*tuple.exact)[static_cast<std::size_t>(j)]);
                        mat.a[static_cast<std::size_t>(k * mat.cols + col)] = v.to_double();
                        mat.aq[static_cast<std::size_t>(k * mat.cols + col)] = std::move(v);
                    } else {
                        mat.a[static_cast<std::size_t>(k * mat.cols + col)] =
                            e.eval(tuple.pts[static_cast<std::size_t>(j)]);
                    }
                } catch (const EvalError& err) {
                    throw MatrixEvalError(err.what(), k, j);
                }
            }
        }
    }
    return mat;
}

} // namespace

JointMatrix lie_matrix(const ActionSpec& spec, const PointTuple& tuple, Backend backend) {
    if (tuple.dim() != spec.m)
        throw SpecError("tuple points have dimension " + std::to_string(tuple.dim()) +
                        ", spec expects " + std::to_string(spec.m));
    return build(spec.r(), spec.m, backend, tuple, spec.name,
                 [&spec](int k, int l) -> const Expr& {
                     return spec.generators[static_cast<std::size_t>(k)]
                         .coeff[static_cast<std::size_t>(l)];
                 });
}

JointMatrix wronskian_matrix(const FunctionFamily& fam, const PointTuple& tuple, Backend backend) {
    if (tuple.dim() != fam.p)
        throw SpecError("tuple points have dimension " + std::to_string(tuple.dim()) +
                        ", family domain has dimension " + std::to_string(fam.p));
    return build(fam.r(), fam.q, backend, tuple, fam.name,
                 [&fam](int k, int l) -> const Expr& {
                     return fam.functions[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
                 });
}

std::string format_shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string dump_matrix(const JointMatrix& mat) {
    std::string out;
    for (int i = 0; i < mat.rows; ++i) {
        for (int j = 0; j < mat.cols; ++j) {
            if (j) out += ' ';
            if (mat.backend == Backend::Exact)
                out += mat.atq(i, j).to_string();
            else
                out += format_shortest(mat.at(i, j));
        }
        out += '\n';
    }
    return out;
}

} // namespace jointorbit
