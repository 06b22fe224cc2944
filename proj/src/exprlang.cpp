#include "levelband/exprlang.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "levelband/errors.hpp"

namespace levelband {

// ---------------------------------------------------------------------------
// Taylor2 arithmetic
// ---------------------------------------------------------------------------

Taylor2 operator+(const Taylor2& a, const Taylor2& b) {
    return {a.v + b.v, a.dx + b.dx, a.dy + b.dy, a.dxx + b.dxx, a.dxy + b.dxy, a.dyy + b.dyy};
}

Taylor2 operator-(const Taylor2& a, const Taylor2& b) {
    return {a.v - b.v, a.dx - b.dx, a.dy - b.dy, a.dxx - b.dxx, a.dxy - b.dxy, a.dyy - b.dyy};
}

Taylor2 operator-(const Taylor2& a) {
    return {-a.v, -a.dx, -a.dy, -a.dxx, -a.dxy, -a.dyy};
}

Taylor2 operator*(const Taylor2& a, const Taylor2& b) {
    Taylor2 r;
    r.v = a.v * b.v;
    r.dx = a.dx * b.v + a.v * b.dx;
    r.dy = a.dy * b.v + a.v * b.dy;
    r.dxx = a.dxx * b.v + 2.0 * a.dx * b.dx + a.v * b.dxx;
    r.dxy = a.dxy * b.v + a.dx * b.dy + a.dy * b.dx + a.v * b.dxy;
    r.dyy = a.dyy * b.v + 2.0 * a.dy * b.dy + a.v * b.dyy;
    return r;
}

namespace {

// Quotient rule solved from a = q*b, degree by degree.
Taylor2 divide(const Taylor2& a, const Taylor2& b) {
    Taylor2 q;
    q.v = a.v / b.v;
    q.dx = (a.dx - q.v * b.dx) / b.v;
    q.dy = (a.dy - q.v * b.dy) / b.v;
    q.dxx = (a.dxx - 2.0 * q.dx * b.dx - q.v * b.dxx) / b.v;
    q.dxy = (a.dxy - q.dx * b.dy - q.dy * b.dx - q.v * b.dxy) / b.v;
    q.dyy = (a.dyy - 2.0 * q.dy * b.dy - q.v * b.dyy) / b.v;
    return q;
}

// Chain rule through order 2 for a scalar function with value f0 and
// derivatives f1, f2 at u.v.
Taylor2 chain(const Taylor2& u, double f0, double f1, double f2) {
    Taylor2 r;
    r.v = f0;
    r.dx = f1 * u.dx;
    r.dy = f1 * u.dy;
    r.dxx = f2 * u.dx * u.dx + f1 * u.dxx;
    r.dxy = f2 * u.dx * u.dy + f1 * u.dxy;
    r.dyy = f2 * u.dy * u.dy + f1 * u.dyy;
    return r;
}

} // namespace

// ---------------------------------------------------------------------------
// Tokenizer / parser
// ---------------------------------------------------------------------------

namespace ast {

const char* fn_name(Fn fn) {
    switch (fn) {
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Exp: return "exp";
    case Fn::Log: return "log";
    case Fn::Sqrt: return "sqrt";
    case Fn::Tanh: return "tanh";
    }
    return "?";
}

} // namespace ast

namespace {

using ast::Fn;
using ast::Kind;
using ast::Node;
using ast::VarName;
using NodePtr = std::shared_ptr<const Node>;

struct Token {
    enum Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Type type;
    std::size_t offset;
    double number = 0.0;
    std::string ident;
};

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            const char* start = text.c_str() + i;
            char* end = nullptr;
            const double value = std::strtod(start, &end);
            tokens.push_back({Token::Number, i, value, {}});
            i += static_cast<std::size_t>(end - start);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                       text[j] == '_'))
                ++j;
            Token t{Token::Ident, i, 0.0, text.substr(i, j - i)};
            tokens.push_back(std::move(t));
            i = j;
            continue;
        }
        Token::Type type;
        switch (c) {
        case '+': type = Token::Plus; break;
        case '-': type = Token::Minus; break;
        case '*': type = Token::Star; break;
        case '/': type = Token::Slash; break;
        case '^': type = Token::Caret; break;
        case '(': type = Token::LParen; break;
        case ')': type = Token::RParen; break;
        default:
            throw SyntaxError(std::string("unexpected character '") + c + "'", i);
        }
        tokens.push_back({type, i, 0.0, {}});
        ++i;
    }
    tokens.push_back({Token::End, text.size(), 0.0, {}});
    return tokens;
}

bool lookup_fn(const std::string& name, Fn& fn) {
    if (name == "sin") fn = Fn::Sin;
    else if (name == "cos") fn = Fn::Cos;
    else if (name == "exp") fn = Fn::Exp;
    else if (name == "log") fn = Fn::Log;
    else if (name == "sqrt") fn = Fn::Sqrt;
    else if (name == "tanh") fn = Fn::Tanh;
    else return false;
    return true;
}

class Parser {
public:
    explicit Parser(const std::string& text) : tokens_(tokenize(text)) {}

    NodePtr parse_all() {
        NodePtr e = parse_expr();
        if (peek().type != Token::End)
            throw SyntaxError("unexpected token", peek().offset);
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }
    bool match(Token::Type t) {
        if (peek().type == t) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr make(Kind kind, std::size_t offset, NodePtr a = nullptr, NodePtr b = nullptr) {
        auto n = std::make_shared<Node>();
        n->kind = kind;
        n->offset = offset;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        while (peek().type == Token::Plus || peek().type == Token::Minus) {
            const Token& op = advance();
            NodePtr rhs = parse_term();
            lhs = make(op.type == Token::Plus ? Kind::Add : Kind::Sub, op.offset,
                       std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        while (peek().type == Token::Star || peek().type == Token::Slash) {
            const Token& op = advance();
            NodePtr rhs = parse_unary();
            lhs = make(op.type == Token::Star ? Kind::Mul : Kind::Div, op.offset,
                       std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    NodePtr parse_unary() {
        if (peek().type == Token::Minus) {
            const Token& op = advance();
            return make(Kind::Neg, op.offset, parse_unary());
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (peek().type == Token::Caret) {
            const Token& op = advance();
            auto n = std::make_shared<Node>();
            n->kind = Kind::Pow;
            n->offset = op.offset;
            n->exponent = parse_exponent();
            n->a = std::move(base);
            return n;
        }
        return base;
    }

    // Exponents are numeric literals, optionally negated; a right-associative
    // chain of literal exponents folds into one value (2^3^2 -> 512).
    double parse_exponent() {
        double sign = 1.0;
        while (peek().type == Token::Minus) {
            advance();
            sign = -sign;
        }
        if (peek().type != Token::Number)
            throw SyntaxError("exponent must be a numeric literal", peek().offset);
        const double value = advance().number;
        if (peek().type == Token::Caret) {
            advance();
            return sign * std::pow(value, parse_exponent());
        }
        return sign * value;
    }

    NodePtr parse_atom() {
        const Token& t = advance();
        switch (t.type) {
        case Token::Number: {
            auto n = std::make_shared<Node>();
            n->kind = Kind::Const;
            n->offset = t.offset;
            n->constant = t.number;
            return n;
        }
        case Token::Ident: {
            if (t.ident == "x" || t.ident == "y") {
                auto n = std::make_shared<Node>();
                n->kind = Kind::Var;
                n->offset = t.offset;
                n->var = t.ident == "x" ? VarName::X : VarName::Y;
                return n;
            }
            Fn fn;
            const bool is_fn = lookup_fn(t.ident, fn);
            if (peek().type == Token::LParen) {
                if (!is_fn)
                    throw UnknownFunction(t.ident, t.offset);
                advance();
                NodePtr arg = parse_expr();
                if (!match(Token::RParen))
                    throw SyntaxError("expected ')'", peek().offset);
                auto n = std::make_shared<Node>();
                n->kind = Kind::Call;
                n->offset = t.offset;
                n->fn = fn;
                n->a = std::move(arg);
                return n;
            }
            if (is_fn)
                throw SyntaxError("expected '(' after function name", peek().offset);
            throw UnknownVariable(t.ident, t.offset);
        }
        case Token::LParen: {
            NodePtr e = parse_expr();
            if (!match(Token::RParen))
                throw SyntaxError("expected ')'", peek().offset);
            return e;
        }
        default:
            throw SyntaxError("expected an operand", t.offset);
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace

ExprAst parse(const std::string& text) {
    if (text.empty())
        throw SyntaxError("empty expression", 0);
    Parser parser(text);
    return {parser.parse_all(), text};
}

// ---------------------------------------------------------------------------
// Pretty printing
// ---------------------------------------------------------------------------

namespace {

// Larger binds tighter.
int precedence(Kind kind) {
    switch (kind) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    default: return 5;
    }
}

std::string number_repr(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void print_node(const Node& n, int parent_prec, std::string& out) {
    const int prec = precedence(n.kind);
    const bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (n.kind) {
    case Kind::Const:
        if (n.constant < 0) {
            // A negative literal needs its own parens under a tighter operator.
            if (!parens && parent_prec > 1) out += '(';
            out += number_repr(n.constant);
            if (!parens && parent_prec > 1) out += ')';
        } else {
            out += number_repr(n.constant);
        }
        break;
    case Kind::Var:
        out += n.var == VarName::X ? 'x' : 'y';
        break;
    case Kind::Neg:
        out += '-';
        print_node(*n.a, prec + 1, out);
        break;
    case Kind::Add:
        print_node(*n.a, prec, out);
        out += " + ";
        print_node(*n.b, prec + 1, out);
        break;
    case Kind::Sub:
        print_node(*n.a, prec, out);
        out += " - ";
        print_node(*n.b, prec + 1, out);
        break;
    case Kind::Mul:
        print_node(*n.a, prec, out);
        out += "*";
        print_node(*n.b, prec + 1, out);
        break;
    case Kind::Div:
        print_node(*n.a, prec, out);
        out += "/";
        print_node(*n.b, prec + 1, out);
        break;
    case Kind::Pow:
        print_node(*n.a, prec + 1, out);
        out += '^';
        if (n.exponent < 0) {
            out += '-';
            out += number_repr(-n.exponent);
        } else {
            out += number_repr(n.exponent);
        }
        break;
    case Kind::Call:
        out += ast::fn_name(n.fn);
        out += '(';
        print_node(*n.a, 0, out);
        out += ')';
        break;
    }
    if (parens) out += ')';
}

bool node_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Kind::Const: return a.constant == b.constant;
    case Kind::Var: return a.var == b.var;
    case Kind::Pow: return a.exponent == b.exponent && node_equal(*a.a, *b.a);
    case Kind::Call: return a.fn == b.fn && node_equal(*a.a, *b.a);
    case Kind::Neg: return node_equal(*a.a, *b.a);
    default: return node_equal(*a.a, *b.a) && node_equal(*a.b, *b.b);
    }
}

} // namespace

std::string pretty_print(const ExprAst& expr) {
    std::string out;
    print_node(*expr.root, 0, out);
    return out;
}

bool ast_equal(const ExprAst& a, const ExprAst& b) {
    return node_equal(*a.root, *b.root);
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

bool integer_exponent(double e, long long& n) {
    if (e != std::floor(e) || std::fabs(e) > 1e9)
        return false;
    n = static_cast<long long>(e);
    return true;
}

Taylor2 eval_node(const Node& n, const Point2& p) {
    switch (n.kind) {
    case Kind::Const:
        return Taylor2::constant(n.constant);
    case Kind::Var:
        return n.var == VarName::X ? Taylor2::var_x(p.x) : Taylor2::var_y(p.y);
    case Kind::Neg:
        return -eval_node(*n.a, p);
    case Kind::Add:
        return eval_node(*n.a, p) + eval_node(*n.b, p);
    case Kind::Sub:
        return eval_node(*n.a, p) - eval_node(*n.b, p);
    case Kind::Mul:
        return eval_node(*n.a, p) * eval_node(*n.b, p);
    case Kind::Div: {
        const Taylor2 a = eval_node(*n.a, p);
        const Taylor2 b = eval_node(*n.b, p);
        if (b.v == 0.0)
            throw DomainFault("division by zero", n.offset, p.x, p.y);
        return divide(a, b);
    }
    case Kind::Pow: {
        const Taylor2 base = eval_node(*n.a, p);
        long long k;
        if (integer_exponent(n.exponent, k)) {
            // Repeated multiplication keeps integer powers exact at base 0.
            const unsigned long long m = static_cast<unsigned long long>(k < 0 ? -k : k);
            Taylor2 acc = Taylor2::constant(1.0);
            for (unsigned long long i = 0; i < m; ++i)
                acc = acc * base;
            if (k < 0) {
                if (base.v == 0.0)
                    throw DomainFault("zero raised to a negative power", n.offset, p.x, p.y);
                return divide(Taylor2::constant(1.0), acc);
            }
            return acc;
        }
        if (base.v <= 0.0)
            throw DomainFault("non-integer power of a non-positive base", n.offset, p.x, p.y);
        const double e = n.exponent;
        const double f0 = std::pow(base.v, e);
        const double f1 = e * std::pow(base.v, e - 1.0);
        const double f2 = e * (e - 1.0) * std::pow(base.v, e - 2.0);
        return chain(base, f0, f1, f2);
    }
    case Kind::Call: {
        const Taylor2 u = eval_node(*n.a, p);
        switch (n.fn) {
        case Fn::Sin:
            return chain(u, std::sin(u.v), std::cos(u.v), -std::sin(u.v));
        case Fn::Cos:
            return chain(u, std::cos(u.v), -std::sin(u.v), -std::cos(u.v));
        case Fn::Exp: {
            const double e = std::exp(u.v);
            return chain(u, e, e, e);
        }
        case Fn::Log:
            if (u.v <= 0.0)
                throw DomainFault("log of a non-positive value", n.offset, p.x, p.y);
            return chain(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v));
        case Fn::Sqrt: {
            if (u.v < 0.0)
                throw DomainFault("sqrt of a negative value", n.offset, p.x, p.y);
            if (u.v == 0.0)
                throw DomainFault("sqrt at zero: derivative singular", n.offset, p.x, p.y);
            const double s = std::sqrt(u.v);
            return chain(u, s, 0.5 / s, -0.25 / (s * u.v));
        }
        case Fn::Tanh: {
            const double t = std::tanh(u.v);
            const double sech2 = 1.0 - t * t;
            return chain(u, t, sech2, -2.0 * t * sech2);
        }
        }
        break;
    }
    }
    throw Error("corrupt expression tree");
}

class ExprField final : public ScalarField {
public:
    ExprField(ExprAst expr, Window window) : expr_(std::move(expr)), window_(window) {}

    Jet2 jet(const Point2& p) const override { return eval_taylor2(expr_, p); }
    const Window& window() const override { return window_; }
    std::string description() const override { return "expr:" + expr_.source; }

private:
    ExprAst expr_;
    Window window_;
};

} // namespace

Jet2 eval_taylor2(const ExprAst& expr, const Point2& p) {
    if (!p.finite())
        throw Error("non-finite evaluation point");
    const Taylor2 t = eval_node(*expr.root, p);
    Jet2 j;
    j.value = t.v;
    j.grad = {t.dx, t.dy};
    j.hess = {t.dxx, t.dxy, t.dyy};
    if (!j.finite())
        throw DomainFault("non-finite result (overflow or singularity)", expr.root->offset,
                          p.x, p.y);
    return j;
}

FieldPtr compile_field(const ExprAst& expr, const Window& window) {
    if (!window.valid())
        throw Error("invalid window");
    return std::make_shared<ExprField>(expr, window);
}

} // namespace levelband
