#pragma once

#include <memory>
#include <string>

#include "levelband/field.hpp"
#include "levelband/geometry.hpp"

namespace levelband {

/// Second-order truncated Taylor value in two variables: the value and all
/// partials through order 2. Arithmetic on Taylor2 implements the exact
/// chain/product/quotient rules, so evaluating an expression on seeded
/// Taylor2 operands yields machine-precision jets.
struct Taylor2 {
    double v = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    double dxx = 0.0;
    double dxy = 0.0;
    double dyy = 0.0;

    static Taylor2 constant(double c) { return {c, 0, 0, 0, 0, 0}; }
    static Taylor2 var_x(double x) { return {x, 1, 0, 0, 0, 0}; }
    static Taylor2 var_y(double y) { return {y, 0, 1, 0, 0, 0}; }
};

Taylor2 operator+(const Taylor2& a, const Taylor2& b);
Taylor2 operator-(const Taylor2& a, const Taylor2& b);
Taylor2 operator-(const Taylor2& a);
Taylor2 operator*(const Taylor2& a, const Taylor2& b);

namespace ast {

enum class Kind { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
enum class VarName { X, Y };
enum class Fn { Sin, Cos, Exp, Log, Sqrt, Tanh };

struct Node {
    Kind kind;
    std::size_t offset = 0;       // byte offset of the token that produced the node
    double constant = 0.0;        // Kind::Const
    VarName var = VarName::X;     // Kind::Var
    double exponent = 0.0;        // Kind::Pow
    Fn fn = Fn::Sin;              // Kind::Call
    std::shared_ptr<const Node> a; // operand / left / base / call argument
    std::shared_ptr<const Node> b; // right operand
};

const char* fn_name(Fn fn);

} // namespace ast

/// Parsed expression in variables x, y. Immutable after parse; evaluation is
/// pure, so concurrent use is safe.
struct ExprAst {
    std::shared_ptr<const ast::Node> root;
    std::string source;
};

/// Structural equality (offsets ignored).
bool ast_equal(const ExprAst& a, const ExprAst& b);

/// Parses the expression grammar:
///   expr  := term (('+'|'-') term)*
///   term  := unary (('*'|'/') unary)*
///   unary := '-' unary | power
///   power := atom ['^' exponent]          (right-associative)
///   atom  := number | 'x' | 'y' | fn '(' expr ')' | '(' expr ')'
/// Exponents are numeric literals (optionally negated); functions are
/// sin, cos, exp, log, sqrt, tanh. Whitespace is insignificant.
///
/// Throws SyntaxError (with byte offset), UnknownFunction, UnknownVariable.
ExprAst parse(const std::string& text);

/// Prints with minimal parentheses; reparsing yields a structurally
/// identical AST.
std::string pretty_print(const ExprAst& expr);

/// Exact jet of the expression at p via forward-mode AD.
/// Throws DomainFault where the expression (or a derivative) is undefined.
Jet2 eval_taylor2(const ExprAst& expr, const Point2& p);

/// Wraps an expression as a ScalarField on the given window.
FieldPtr compile_field(const ExprAst& expr, const Window& window);

} // namespace levelband
