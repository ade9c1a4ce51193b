#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hspace/jet.hpp"

namespace hspace {

enum class ExprKind { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

/// Immutable expression tree. `i` lexes as the imaginary unit; `^` takes a
/// constant integer exponent; calls are the fixed set sin, cos, exp, log,
/// sqrt, conj, re, im, abs.
struct ExprNode {
    ExprKind kind;
    Complex number{};        // Number
    std::string name;        // Variable, Call
    long exponent = 0;       // Pow
    ExprPtr lhs, rhs;        // Neg/Call use lhs only
};

// -- construction -----------------------------------------------------------

ExprPtr num(Complex value);
ExprPtr num(double value);
ExprPtr var(std::string name);
ExprPtr neg(ExprPtr a);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr div(ExprPtr a, ExprPtr b);
ExprPtr pow(ExprPtr a, long k);
ExprPtr call(std::string_view fn, ExprPtr a);

/// Parses with the usual precedence (^ above unary minus above *,/ above
/// +,-); +,-,*,/ are left-associative and ^ right-associative. Throws
/// SyntaxError carrying the byte offset and the expected-token set.
ExprPtr parse_expression(std::string_view source);

std::string render(const ExprPtr& e);
bool structurally_equal(const ExprPtr& a, const ExprPtr& b);

using JetEnv = std::map<std::string, Jet2, std::less<>>;
using ValueEnv = std::map<std::string, Complex, std::less<>>;

/// Evaluates over second-order jets. Every variable must be bound and all
/// bound jets must share one base dimension.
Jet2 eval_jet(const ExprPtr& e, const JetEnv& env);
Complex eval_value(const ExprPtr& e, const ValueEnv& env);

/// Symbolic partial derivative with respect to a *real* variable: conj, re,
/// im pass through to the derivative of the argument.
ExprPtr derivative(const ExprPtr& e, const std::string& variable);

ExprPtr substitute(const ExprPtr& e, const std::map<std::string, ExprPtr>& replacements);

void collect_variables(const ExprPtr& e, std::vector<std::string>& out);

// -- predicates (domain guards) ----------------------------------------------

enum class CompareOp { LT, LE, GT, GE, NE, EQ };

struct Comparison {
    ExprPtr lhs;
    CompareOp op;
    ExprPtr rhs;
};

/// Conjunction of comparisons on real parts; an empty predicate is true.
/// != / == use the tolerance |lhs-rhs| > / <= 1e-9.
struct Predicate {
    std::vector<Comparison> terms;
    bool trivial() const { return terms.empty(); }
};

Predicate parse_predicate(std::string_view source);
bool eval_predicate(const Predicate& p, const ValueEnv& env);
std::string render(const Predicate& p);

}  // namespace hspace
