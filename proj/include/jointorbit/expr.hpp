#pragma once

#include "jointorbit/rational.hpp"

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jointorbit {

/// Thrown by the parser; `offset` is the byte position in the input.
struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg + " (offset " + std::to_string(off) + ")"), offset(off) {}
};

/// Thrown when evaluation leaves the domain of an operation; `subexpr` is the
/// source text of the offending subexpression.
struct EvalError : std::runtime_error {
    std::string subexpr;
    EvalError(const std::string& msg, std::string sub)
        : std::runtime_error(msg + " in '" + sub + "'"), subexpr(std::move(sub)) {}
};

enum class Builtin { Sin, Cos, Exp, Sqrt, Abs, Hstep };

/// h(t) = 0 for t <= 0, exp(-1/t) for t > 0. Smooth but not analytic at 0.
double hstep(double t);

/// Parsed scalar expression over a fixed list of coordinate names.
///
/// Grammar (documented in docs/grammar.ebnf): + - * / with the usual
/// precedence, unary minus, integer powers `e^k` with a literal non-negative
/// exponent binding tighter than unary minus, parentheses, and the builtins
/// sin, cos, exp, sqrt, abs, hstep. Numeric literals are non-negative
/// integers or finite decimals; decimals are converted exactly to rationals
/// at parse time, and a quotient of two literals folds into a rational
/// literal. Trees are immutable; evaluation is reentrant.
class Expr {
  public:
    struct Node;

    Expr() = default;

    static Expr parse(std::string_view text, std::span<const std::string> coords);

    double eval(std::span<const double> point) const;

    // Exact evaluation over rationals; throws EvalError if the tree uses a
    // builtin (only + - * / ^ are rational-closed).
    Rational eval_exact(std::span<const Rational> point) const;

    // Original source text.
    const std::string& source() const { return source_; }

    // Canonical s-expression form, e.g. "(sub (mul (pow x 2) y) 1/2)".
    std::string repr() const;

    int num_coords() const { return ncoords_; }
    const std::shared_ptr<const Node>& root() const { return root_; }

    bool operator==(const Expr& o) const { return source_ == o.source_; }

  private:
    std::shared_ptr<const Node> root_;
    std::string source_;
    int ncoords_ = 0;
};

/// Multivariate polynomial with exact rational coefficients.
struct PolyForm {
    int nvars = 0;
    // (exponent vector, coefficient), exponent vectors sorted lexicographically,
    // coefficients nonzero
    std::vector<std::pair<std::vector<int>, Rational>> terms;

    Rational eval_exact(std::span<const Rational> point) const;
    double eval(std::span<const double> point) const;
    int total_degree() const;
    bool is_zero() const { return terms.empty(); }
    bool is_constant() const;

    // Textual form re-parsable by Expr::parse under the same coordinates.
    std::string to_string(std::span<const std::string> coords) const;
};

/// Succeeds exactly when the expression uses only variables, rational
/// literals, + - *, integer powers, and division by a nonzero constant.
std::optional<PolyForm> to_poly(const Expr& e);

} // namespace jointorbit
