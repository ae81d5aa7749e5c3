#include "jointorbit/expr.hpp"

#include <cctype>
#include <cmath>
#include <map>

namespace jointorbit {

double hstep(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

struct Expr::Node {
    enum class Kind { Literal, Variable, Add, Sub, Mul, Div, Neg, Pow, Call } kind;
    Rational lit;                     // Literal
    int var = -1;                     // Variable (index into coords)
    std::string var_name;             // Variable
    Builtin fn = Builtin::Sin;        // Call
    int exponent = 0;                 // Pow
    std::shared_ptr<const Node> a, b; // children
    std::size_t src_begin = 0, src_end = 0;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

struct Token {
    enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } type;
    std::size_t begin = 0, end = 0;
    std::string_view text;
};

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& cur() const { return cur_; }

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        cur_.begin = pos_;
        if (pos_ >= src_.size()) {
            cur_.type = Token::Type::End;
            cur_.end = pos_;
            cur_.text = {};
            return;
        }
        char c = src_[pos_];
        switch (c) {
            case '+': single(Token::Type::Plus); return;
            case '-': single(Token::Type::Minus); return;
            case '*': single(Token::Type::Star); return;
            case '/': single(Token::Type::Slash); return;
            case '^': single(Token::Type::Caret); return;
            case '(': single(Token::Type::LParen); return;
            case ')': single(Token::Type::RParen); return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t p = pos_;
            while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
            if (p < src_.size() && src_[p] == '.') {
                ++p;
                if (p >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[p])))
                    throw ParseError("digits expected after decimal point", p);
                while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
            }
            cur_.type = Token::Type::Number;
            cur_.end = p;
            cur_.text = src_.substr(pos_, p - pos_);
            pos_ = p;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t p = pos_;
            while (p < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[p])) || src_[p] == '_'))
                ++p;
            cur_.type = Token::Type::Ident;
            cur_.end = p;
            cur_.text = src_.substr(pos_, p - pos_);
            pos_ = p;
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

  private:
    void single(Token::Type t) {
        cur_.type = t;
        cur_.end = pos_ + 1;
        cur_.text = src_.substr(pos_, 1);
        pos_ += 1;
    }
    std::string_view src_;
    std::size_t pos_ = 0;
    Token cur_;
};

std::optional<Builtin> builtin_by_name(std::string_view name) {
    if (name == "sin") return Builtin::Sin;
    if (name == "cos") return Builtin::Cos;
    if (name == "exp") return Builtin::Exp;
    if (name == "sqrt") return Builtin::Sqrt;
    if (name == "abs") return Builtin::Abs;
    if (name == "hstep") return Builtin::Hstep;
    return std::nullopt;
}

const char* builtin_name(Builtin f) {
    switch (f) {
        case Builtin::Sin: return "sin";
        case Builtin::Cos: return "cos";
        case Builtin::Exp: return "exp";
        case Builtin::Sqrt: return "sqrt";
        case Builtin::Abs: return "abs";
        case Builtin::Hstep: return "hstep";
    }
    return "?";
}

class Parser {
  public:
    Parser(std::string_view src, std::span<const std::string> coords)
        : lex_(src), coords_(coords) {}

    NodePtr parse() {
        NodePtr e = sum();
        if (lex_.cur().type != Token::Type::End)
            throw ParseError("unexpected trailing input", lex_.cur().begin);
        return e;
    }

  private:
    Lexer lex_;
    std::span<const std::string> coords_;

    static std::shared_ptr<Expr::Node> make(Kind k, std::size_t b, std::size_t e) {
        auto n = std::make_shared<Expr::Node>();
        n->kind = k;
        n->src_begin = b;
        n->src_end = e;
        return n;
    }

    NodePtr sum() {
        NodePtr left = term();
        for (;;) {
            auto t = lex_.cur().type;
            if (t != Token::Type::Plus && t != Token::Type::Minus) return left;
            lex_.advance();
            NodePtr right = term();
            auto n = std::make_shared<Expr::Node>();
            n->kind = t == Token::Type::Plus ? Kind::Add : Kind::Sub;
            n->src_begin = left->src_begin;
            n->src_end = right->src_end;
            n->a = left;
            n->b = right;
            left = n;
        }
    }

    NodePtr term() {
        NodePtr left = unary();
        for (;;) {
            auto t = lex_.cur().type;
            if (t != Token::Type::Star && t != Token::Type::Slash) return left;
            lex_.advance();
            NodePtr right = unary();
            // fold a quotient of literals into a rational literal
            if (t == Token::Type::Slash && left->kind == Kind::Literal &&
                right->kind == Kind::Literal && !right->lit.is_zero()) {
                auto n = make(Kind::Literal, left->src_begin, right->src_end);
                n->lit = left->lit / right->lit;
                left = n;
                continue;
            }
            auto n = std::make_shared<Expr::Node>();
            n->kind = t == Token::Type::Star ? Kind::Mul : Kind::Div;
            n->src_begin = left->src_begin;
            n->src_end = right->src_end;
            n->a = left;
            n->b = right;
            left = n;
        }
    }

    NodePtr unary() {
        if (lex_.cur().type == Token::Type::Minus) {
            std::size_t b = lex_.cur().begin;
            lex_.advance();
            NodePtr inner = unary();
            if (inner->kind == Kind::Literal) {
                auto n = make(Kind::Literal, b, inner->src_end);
                n->lit = -inner->lit;
                return n;
            }
            auto n = make(Kind::Neg, b, inner->src_end);
            n->a = inner;
            return n;
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (lex_.cur().type != Token::Type::Caret) return base;
        lex_.advance();
        const Token& t = lex_.cur();
        if (t.type != Token::Type::Number || t.text.find('.') != std::string_view::npos)
            throw ParseError("integer exponent expected after '^'", t.begin);
        long long k = 0;
        for (char c : t.text) {
            k = k * 10 + (c - '0');
            if (k > 9999) throw ParseError("exponent too large", t.begin);
        }
        std::size_t end = t.end;
        lex_.advance();
        auto n = make(Kind::Pow, base->src_begin, end);
        n->a = base;
        n->exponent = static_cast<int>(k);
        return n;
    }

    NodePtr atom() {
        const Token t = lex_.cur();
        switch (t.type) {
            case Token::Type::Number: {
                lex_.advance();
                auto n = make(Kind::Literal, t.begin, t.end);
                auto r = Rational::parse(t.text);
                if (!r) throw ParseError("malformed number", t.begin);
                n->lit = *r;
                return n;
            }
            case Token::Type::Ident: {
                lex_.advance();
                if (lex_.cur().type == Token::Type::LParen) {
                    auto fn = builtin_by_name(t.text);
                    if (!fn)
                        throw ParseError("unknown function '" + std::string(t.text) + "'", t.begin);
                    lex_.advance();
                    NodePtr arg = sum();
                    if (lex_.cur().type != Token::Type::RParen)
                        throw ParseError("')' expected", lex_.cur().begin);
                    std::size_t end = lex_.cur().end;
                    lex_.advance();
                    auto n = make(Kind::Call, t.begin, end);
                    n->fn = *fn;
                    n->a = arg;
                    return n;
                }
                for (std::size_t i = 0; i < coords_.size(); ++i) {
                    if (coords_[i] == t.text) {
                        auto n = make(Kind::Variable, t.begin, t.end);
                        n->var = static_cast<int>(i);
                        n->var_name = std::string(t.text);
                        return n;
                    }
                }
                throw ParseError("unknown identifier '" + std::string(t.text) + "'", t.begin);
            }
            case Token::Type::LParen: {
                lex_.advance();
                NodePtr inner = sum();
                if (lex_.cur().type != Token::Type::RParen)
                    throw ParseError("')' expected", lex_.cur().begin);
                // widen the span over the parentheses so error snippets read well
                auto widened = std::make_shared<Expr::Node>(*inner);
                widened->src_begin = t.begin;
                widened->src_end = lex_.cur().end;
                lex_.advance();
                return widened;
            }
            case Token::Type::End: throw ParseError("unexpected end of input", t.begin);
            default: throw ParseError("unexpected token", t.begin);
        }
    }
};

std::string snippet(const std::string& src, const Expr::Node& n) {
    if (n.src_end <= n.src_begin || n.src_end > src.size()) return src;
    return src.substr(n.src_begin, n.src_end - n.src_begin);
}

double eval_node(const Expr::Node& n, std::span<const double> pt, const std::string& src) {
    switch (n.kind) {
        case Kind::Literal: return n.lit.to_double();
        case Kind::Variable: return pt[static_cast<std::size_t>(n.var)];
        case Kind::Add: return eval_node(*n.a, pt, src) + eval_node(*n.b, pt, src);
        case Kind::Sub: return eval_node(*n.a, pt, src) - eval_node(*n.b, pt, src);
        case Kind::Mul: return eval_node(*n.a, pt, src) * eval_node(*n.b, pt, src);
        case Kind::Div: {
            double d = eval_node(*n.b, pt, src);
            if (d == 0.0) throw EvalError("division by zero", snippet(src, n));
            return eval_node(*n.a, pt, src) / d;
        }
        case Kind::Neg: return -eval_node(*n.a, pt, src);
        case Kind::Pow: {
            double b = eval_node(*n.a, pt, src);
            double acc = 1.0, p = b;
            int k = n.exponent;
            while (k) {
                if (k & 1) acc *= p;
                p *= p;
                k >>= 1;
            }
            return acc;
        }
        case Kind::Call: {
            double v = eval_node(*n.a, pt, src);
            switch (n.fn) {
                case Builtin::Sin: return std::sin(v);
                case Builtin::Cos: return std::cos(v);
                case Builtin::Exp: return std::exp(v);
                case Builtin::Sqrt:
                    if (v < 0.0) throw EvalError("sqrt of negative value", snippet(src, n));
                    return std::sqrt(v);
                case Builtin::Abs: return std::fabs(v);
                case Builtin::Hstep: return hstep(v);
            }
            return 0.0;
        }
    }
    return 0.0;
}

Rational eval_exact_node(const Expr::Node& n, std::span<const Rational> pt, const std::string& src) {
    switch (n.kind) {
        case Kind::Literal: return n.lit;
        case Kind::Variable: return pt[static_cast<std::size_t>(n.var)];
        case Kind::Add: return eval_exact_node(*n.a, pt, src) + eval_exact_node(*n.b, pt, src);
        case Kind::Sub: return eval_exact_node(*n.a, pt, src) - eval_exact_node(*n.b, pt, src);
        case Kind::Mul: return eval_exact_node(*n.a, pt, src) * eval_exact_node(*n.b, pt, src);
        case Kind::Div: {
            Rational d = eval_exact_node(*n.b, pt, src);
            if (d.is_zero()) throw EvalError("division by zero", snippet(src, n));
            return eval_exact_node(*n.a, pt, src) / d;
        }
        case Kind::Neg: return -eval_exact_node(*n.a, pt, src);
        case Kind::Pow:
            return eval_exact_node(*n.a, pt, src).pow(static_cast<unsigned>(n.exponent));
        case Kind::Call:
            throw EvalError("not exactly evaluable", snippet(src, n));
    }
    return Rational(0);
}

void repr_node(const Expr::Node& n, std::string& out) {
    switch (n.kind) {
        case Kind::Literal: out += n.lit.to_string(); return;
        case Kind::Variable: out += n.var_name; return;
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul:
        case Kind::Div: {
            const char* op = n.kind == Kind::Add   ? "add"
                             : n.kind == Kind::Sub ? "sub"
                             : n.kind == Kind::Mul ? "mul"
                                                   : "div";
            out += "(";
            out += op;
            out += " ";
            repr_node(*n.a, out);
            out += " ";
            repr_node(*n.b, out);
            out += ")";
            return;
        }
        case Kind::Neg:
            out += "(neg ";
            repr_node(*n.a, out);
            out += ")";
            return;
        case Kind::Pow:
            out += "(pow ";
            repr_node(*n.a, out);
            out += " " + std::to_string(n.exponent) + ")";
            return;
        case Kind::Call:
            out += "(";
            out += builtin_name(n.fn);
            out += " ";
            repr_node(*n.a, out);
            out += ")";
            return;
    }
}

} // namespace

Expr Expr::parse(std::string_view text, std::span<const std::string> coords) {
    if (text.empty() || text.find_first_not_of(" \t\r\n") == std::string_view::npos)
        throw ParseError("empty input", 0);
    Expr e;
    e.source_ = std::string(text);
    e.ncoords_ = static_cast<int>(coords.size());
    Parser p(e.source_, coords);
    e.root_ = p.parse();
    return e;
}

double Expr::eval(std::span<const double> point) const {
    return eval_node(*root_, point, source_);
}

Rational Expr::eval_exact(std::span<const Rational> point) const {
    return eval_exact_node(*root_, point, source_);
}

std::string Expr::repr() const {
    std::string out;
    repr_node(*root_, out);
    return out;
}

// --------------------------------------------------------------------------
// PolyForm

namespace {

using TermMap = std::map<std::vector<int>, Rational>;

PolyForm from_map(int nvars, TermMap&& m) {
    PolyForm p;
    p.nvars = nvars;
    for (auto& [e, c] : m)
        if (!c.is_zero()) p.terms.emplace_back(e, std::move(c));
    return p;
}

TermMap to_map(const PolyForm& p) {
    TermMap m;
    for (const auto& [e, c] : p.terms) m[e] = c;
    return m;
}

PolyForm poly_add(const PolyForm& a, const PolyForm& b, int s) {
    TermMap m = to_map(a);
    for (const auto& [e, c] : b.terms) {
        auto it = m.find(e);
        Rational add = s < 0 ? -c : c;
        if (it == m.end())
            m.emplace(e, add);
        else
            it->second += add;
    }
    return from_map(a.nvars, std::move(m));
}

PolyForm poly_mul(const PolyForm& a, const PolyForm& b) {
    TermMap m;
    for (const auto& [ea, ca] : a.terms) {
        for (const auto& [eb, cb] : b.terms) {
            std::vector<int> e(static_cast<std::size_t>(a.nvars), 0);
            for (int i = 0; i < a.nvars; ++i) e[static_cast<std::size_t>(i)] =
                ea[static_cast<std::size_t>(i)] + eb[static_cast<std::size_t>(i)];
            auto it = m.find(e);
            Rational prod = ca * cb;
            if (it == m.end())
                m.emplace(std::move(e), std::move(prod));
            else
                it->second += prod;
        }
    }
    return from_map(a.nvars, std::move(m));
}

PolyForm poly_const(int nvars, Rational c) {
    PolyForm p;
    p.nvars = nvars;
    if (!c.is_zero()) p.terms.emplace_back(std::vector<int>(static_cast<std::size_t>(nvars), 0), std::move(c));
    return p;
}

std::optional<PolyForm> poly_node(const Expr::Node& n, int nvars) {
    switch (n.kind) {
        case Kind::Literal: return poly_const(nvars, n.lit);
        case Kind::Variable: {
            PolyForm p;
            p.nvars = nvars;
            std::vector<int> e(static_cast<std::size_t>(nvars), 0);
            e[static_cast<std::size_t>(n.var)] = 1;
            p.terms.emplace_back(std::move(e), Rational(1));
            return p;
        }
        case Kind::Add:
        case Kind::Sub: {
            auto a = poly_node(*n.a, nvars), b = poly_node(*n.b, nvars);
            if (!a || !b) return std::nullopt;
            return poly_add(*a, *b, n.kind == Kind::Add ? 1 : -1);
        }
        case Kind::Mul: {
            auto a = poly_node(*n.a, nvars), b = poly_node(*n.b, nvars);
            if (!a || !b) return std::nullopt;
            return poly_mul(*a, *b);
        }
        case Kind::Div: {
            // division by a nonzero constant stays polynomial
            auto a = poly_node(*n.a, nvars), b = poly_node(*n.b, nvars);
            if (!a || !b || !b->is_constant() || b->is_zero()) return std::nullopt;
            Rational inv = Rational(1) / b->terms[0].second;
            return poly_mul(*a, poly_const(nvars, inv));
        }
        case Kind::Neg: {
            auto a = poly_node(*n.a, nvars);
            if (!a) return std::nullopt;
            return poly_mul(*a, poly_const(nvars, Rational(-1)));
        }
        case Kind::Pow: {
            auto a = poly_node(*n.a, nvars);
            if (!a) return std::nullopt;
            PolyForm acc = poly_const(nvars, Rational(1));
            for (int i = 0; i < n.exponent; ++i) acc = poly_mul(acc, *a);
            return acc;
        }
        case Kind::Call: return std::nullopt;
    }
    return std::nullopt;
}

} // namespace

std::optional<PolyForm> to_poly(const Expr& e) {
    return poly_node(*e.root(), e.num_coords());
}

Rational PolyForm::eval_exact(std::span<const Rational> point) const {
    Rational acc(0);
    for (const auto& [e, c] : terms) {
        Rational t = c;
        for (int i = 0; i < nvars; ++i) {
            int k = e[static_cast<std::size_t>(i)];
            if (k) t = t * point[static_cast<std::size_t>(i)].pow(static_cast<unsigned>(k));
        }
        acc += t;
    }
    return acc;
}

double PolyForm::eval(std::span<const double> point) const {
    double acc = 0.0;
    for (const auto& [e, c] : terms) {
        double t = c.to_double();
        for (int i = 0; i < nvars; ++i) {
            for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k)
                t *= point[static_cast<std::size_t>(i)];
        }
        acc += t;
    }
    return acc;
}

int PolyForm::total_degree() const {
    int deg = 0;
    for (const auto& [e, c] : terms) {
        int d = 0;
        for (int v : e) d += v;
        deg = std::max(deg, d);
    }
    return deg;
}

bool PolyForm::is_constant() const {
    if (terms.empty()) return true;
    if (terms.size() != 1) return false;
    for (int v : terms[0].first)
        if (v != 0) return false;
    return true;
}

std::string PolyForm::to_string(std::span<const std::string> coords) const {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms) {
        Rational coeff = c;
        if (first) {
            if (coeff.sign() < 0) {
                out += "-";
                coeff = -coeff;
            }
            first = false;
        } else {
            out += coeff.sign() < 0 ? " - " : " + ";
            if (coeff.sign() < 0) coeff = -coeff;
        }
        std::string mono;
        for (int i = 0; i < nvars; ++i) {
            int k = e[static_cast<std::size_t>(i)];
            if (k == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += coords[static_cast<std::size_t>(i)];
            if (k > 1) mono += "^" + std::to_string(k);
        }
        if (mono.empty()) {
            out += coeff.to_string();
        } else if (coeff == Rational(1)) {
            out += mono;
        } else {
            out += coeff.to_string() + "*" + mono;
        }
    }
    return out;
}

} // namespace jointorbit
