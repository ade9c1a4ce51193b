#include "hspace/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace hspace {

namespace {

ExprPtr make_node(ExprNode node) { return std::make_shared<const ExprNode>(std::move(node)); }

bool is_number(const ExprPtr& e, Complex value) {
    return e->kind == ExprKind::Number && e->number == value;
}

Complex cpow_int(Complex base, long k) {
    Complex acc = 1.0, b = base;
    long m = std::labs(k);
    while (m > 0) {
        if (m & 1) acc *= b;
        m >>= 1;
        if (m > 0) b *= b;
    }
    return k < 0 ? 1.0 / acc : acc;
}

const char* const kFunctionNames[] = {"sin", "cos", "exp", "log", "sqrt", "conj", "re", "im", "abs"};

bool is_function_name(std::string_view s) {
    for (const char* f : kFunctionNames)
        if (s == f) return true;
    return false;
}

}  // namespace

ExprPtr num(Complex value) { return make_node({.kind = ExprKind::Number, .number = value}); }
ExprPtr num(double value) { return num(Complex(value, 0.0)); }
ExprPtr var(std::string name) { return make_node({.kind = ExprKind::Variable, .name = std::move(name)}); }

ExprPtr neg(ExprPtr a) {
    if (a->kind == ExprKind::Number) return num(-a->number);
    return make_node({.kind = ExprKind::Neg, .lhs = std::move(a)});
}

ExprPtr add(ExprPtr a, ExprPtr b) {
    if (is_number(a, 0.0)) return b;
    if (is_number(b, 0.0)) return a;
    if (a->kind == ExprKind::Number && b->kind == ExprKind::Number) return num(a->number + b->number);
    return make_node({.kind = ExprKind::Add, .lhs = std::move(a), .rhs = std::move(b)});
}

ExprPtr sub(ExprPtr a, ExprPtr b) {
    if (is_number(b, 0.0)) return a;
    if (a->kind == ExprKind::Number && b->kind == ExprKind::Number) return num(a->number - b->number);
    if (is_number(a, 0.0)) return neg(std::move(b));
    return make_node({.kind = ExprKind::Sub, .lhs = std::move(a), .rhs = std::move(b)});
}

ExprPtr mul(ExprPtr a, ExprPtr b) {
    if (is_number(a, 0.0) || is_number(b, 0.0)) return num(0.0);
    if (is_number(a, 1.0)) return b;
    if (is_number(b, 1.0)) return a;
    if (a->kind == ExprKind::Number && b->kind == ExprKind::Number) return num(a->number * b->number);
    return make_node({.kind = ExprKind::Mul, .lhs = std::move(a), .rhs = std::move(b)});
}

ExprPtr div(ExprPtr a, ExprPtr b) {
    if (is_number(b, 1.0)) return a;
    if (b->kind == ExprKind::Number && !is_number(b, 0.0)) {
        if (a->kind == ExprKind::Number) return num(a->number / b->number);
        if (is_number(a, 0.0)) return num(0.0);
    }
    return make_node({.kind = ExprKind::Div, .lhs = std::move(a), .rhs = std::move(b)});
}

ExprPtr pow(ExprPtr a, long k) {
    if (k == 1) return a;
    if (k == 0) return num(1.0);
    if (a->kind == ExprKind::Number && !(is_number(a, 0.0) && k < 0)) return num(cpow_int(a->number, k));
    return make_node({.kind = ExprKind::Pow, .exponent = k, .lhs = std::move(a)});
}

ExprPtr call(std::string_view fn, ExprPtr a) {
    if (!is_function_name(fn)) throw DomainError("unknown function: " + std::string(fn));
    return make_node({.kind = ExprKind::Call, .name = std::string(fn), .lhs = std::move(a)});
}

// -- lexer -------------------------------------------------------------------

namespace {

enum class Tok {
    Number, Identifier, Plus, Minus, Star, Slash, Caret, LParen, RParen,
    Lt, Le, Gt, Ge, Ne, EqEq, AndAnd, End
};

struct Token {
    Tok kind;
    std::size_t offset;
    std::string text;
    double value = 0.0;
};

const char* token_name(Tok t) {
    switch (t) {
        case Tok::Number: return "number";
        case Tok::Identifier: return "identifier";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Slash: return "'/'";
        case Tok::Caret: return "'^'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Lt: return "'<'";
        case Tok::Le: return "'<='";
        case Tok::Gt: return "'>'";
        case Tok::Ge: return "'>='";
        case Tok::Ne: return "'!='";
        case Tok::EqEq: return "'=='";
        case Tok::AndAnd: return "'&&'";
        case Tok::End: return "end of input";
    }
    return "?";
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }
    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        current_.offset = pos_;
        current_.text.clear();
        if (pos_ >= src_.size()) {
            current_.kind = Tok::End;
            return;
        }
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            current_.kind = Tok::Identifier;
            current_.text = std::string(src_.substr(start, pos_ - start));
            return;
        }
        auto two = [&](char second, Tok yes, Tok no) {
            ++pos_;
            if (pos_ < src_.size() && src_[pos_] == second) {
                ++pos_;
                current_.kind = yes;
            } else {
                current_.kind = no;
            }
        };
        switch (c) {
            case '+': current_.kind = Tok::Plus; ++pos_; return;
            case '-': current_.kind = Tok::Minus; ++pos_; return;
            case '*': current_.kind = Tok::Star; ++pos_; return;
            case '/': current_.kind = Tok::Slash; ++pos_; return;
            case '^': current_.kind = Tok::Caret; ++pos_; return;
            case '(': current_.kind = Tok::LParen; ++pos_; return;
            case ')': current_.kind = Tok::RParen; ++pos_; return;
            case '<': two('=', Tok::Le, Tok::Lt); return;
            case '>': two('=', Tok::Ge, Tok::Gt); return;
            case '!':
                two('=', Tok::Ne, Tok::End);
                if (current_.kind == Tok::End)
                    throw SyntaxError(current_.offset, {"'!='"}, "stray '!' in expression");
                return;
            case '=':
                two('=', Tok::EqEq, Tok::End);
                if (current_.kind == Tok::End)
                    throw SyntaxError(current_.offset, {"'=='"}, "stray '=' in expression");
                return;
            case '&':
                two('&', Tok::AndAnd, Tok::End);
                if (current_.kind == Tok::End)
                    throw SyntaxError(current_.offset, {"'&&'"}, "stray '&' in expression");
                return;
            default:
                throw SyntaxError(pos_, {"number", "identifier", "operator"},
                                  std::string("unexpected character '") + c + "'");
        }
    }

    void lex_number() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // 'e' belongs to a following identifier, not the number
            }
        }
        current_.kind = Tok::Number;
        current_.text = std::string(src_.substr(start, pos_ - start));
        current_.value = std::strtod(current_.text.c_str(), nullptr);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token current_;
};

// -- parser ------------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    ExprPtr parse_full_expression() {
        ExprPtr e = parse_sum();
        expect_end();
        return e;
    }

    Predicate parse_full_predicate() {
        Predicate p;
        p.terms.push_back(parse_comparison());
        while (lex_.peek().kind == Tok::AndAnd) {
            lex_.take();
            p.terms.push_back(parse_comparison());
        }
        expect_end();
        return p;
    }

private:
    [[noreturn]] void fail(std::vector<std::string> expected) {
        const Token& t = lex_.peek();
        std::ostringstream msg;
        msg << "syntax error at offset " << t.offset << ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) msg << (i + 1 == expected.size() ? " or " : ", ");
            msg << expected[i];
        }
        msg << ", found " << token_name(t.kind);
        throw SyntaxError(t.offset, std::move(expected), msg.str());
    }

    void expect_end() {
        if (lex_.peek().kind != Tok::End) fail({"end of input", "operator"});
    }

    Comparison parse_comparison() {
        ExprPtr lhs = parse_sum();
        CompareOp op;
        switch (lex_.peek().kind) {
            case Tok::Lt: op = CompareOp::LT; break;
            case Tok::Le: op = CompareOp::LE; break;
            case Tok::Gt: op = CompareOp::GT; break;
            case Tok::Ge: op = CompareOp::GE; break;
            case Tok::Ne: op = CompareOp::NE; break;
            case Tok::EqEq: op = CompareOp::EQ; break;
            default: fail({"'<'", "'<='", "'>'", "'>='", "'!='", "'=='"});
        }
        lex_.take();
        ExprPtr rhs = parse_sum();
        return {std::move(lhs), op, std::move(rhs)};
    }

    ExprPtr parse_sum() {
        ExprPtr e = parse_product();
        for (;;) {
            const Tok k = lex_.peek().kind;
            if (k == Tok::Plus) {
                lex_.take();
                e = raw_binary(ExprKind::Add, e, parse_product());
            } else if (k == Tok::Minus) {
                lex_.take();
                e = raw_binary(ExprKind::Sub, e, parse_product());
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_product() {
        ExprPtr e = parse_unary();
        for (;;) {
            const Tok k = lex_.peek().kind;
            if (k == Tok::Star) {
                lex_.take();
                e = raw_binary(ExprKind::Mul, e, parse_unary());
            } else if (k == Tok::Slash) {
                lex_.take();
                e = raw_binary(ExprKind::Div, e, parse_unary());
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_unary() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            return neg(parse_unary());
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_primary();
        if (lex_.peek().kind != Tok::Caret) return base;
        Token caret = lex_.take();
        long k = parse_exponent(caret.offset);
        return pow(std::move(base), k);
    }

    // Exponents are constant integers; a chain like a^2^3 folds right to left.
    long parse_exponent(std::size_t caret_offset) {
        bool negate = false;
        while (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            negate = !negate;
        }
        if (lex_.peek().kind != Tok::Number) fail({"integer exponent"});
        Token t = lex_.take();
        double v = t.value;
        if (v != std::floor(v) || std::abs(v) > 1e9)
            throw SyntaxError(t.offset, {"integer exponent"},
                              "exponent must be a constant integer at offset " +
                                  std::to_string(caret_offset));
        long k = static_cast<long>(v);
        if (lex_.peek().kind == Tok::Caret) {
            lex_.take();
            long inner = parse_exponent(caret_offset);
            double folded = std::pow(static_cast<double>(k), static_cast<double>(inner));
            if (!std::isfinite(folded) || std::abs(folded) > 1e9)
                throw SyntaxError(t.offset, {"integer exponent"}, "exponent tower overflows");
            k = static_cast<long>(folded);
        }
        return negate ? -k : k;
    }

    ExprPtr parse_primary() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Tok::Number: {
                Token n = lex_.take();
                return num(Complex(n.value, 0.0));
            }
            case Tok::Identifier: {
                Token id = lex_.take();
                if (id.text == "i") return num(Complex(0.0, 1.0));
                if (is_function_name(id.text)) {
                    if (lex_.peek().kind != Tok::LParen) fail({"'('"});
                    lex_.take();
                    ExprPtr arg = parse_sum();
                    if (lex_.peek().kind != Tok::RParen) fail({"')'"});
                    lex_.take();
                    return make_node({.kind = ExprKind::Call, .name = id.text, .lhs = std::move(arg)});
                }
                return var(id.text);
            }
            case Tok::LParen: {
                lex_.take();
                ExprPtr e = parse_sum();
                if (lex_.peek().kind != Tok::RParen) fail({"')'"});
                lex_.take();
                return e;
            }
            default:
                fail({"number", "identifier", "'('", "'-'"});
        }
    }

    // Binary nodes go through the builders so constant-only subtrees fold the
    // same way however a tree was produced; render/parse is then a stable
    // round trip.
    static ExprPtr raw_binary(ExprKind kind, ExprPtr a, ExprPtr b) {
        switch (kind) {
            case ExprKind::Add: return add(std::move(a), std::move(b));
            case ExprKind::Sub: return sub(std::move(a), std::move(b));
            case ExprKind::Mul: return mul(std::move(a), std::move(b));
            default: return hspace::div(std::move(a), std::move(b));
        }
    }

    Lexer lex_;
};

}  // namespace

ExprPtr parse_expression(std::string_view source) { return Parser(source).parse_full_expression(); }

Predicate parse_predicate(std::string_view source) { return Parser(source).parse_full_predicate(); }

// -- rendering ---------------------------------------------------------------

namespace {

int precedence_of(const ExprNode& e) {
    switch (e.kind) {
        case ExprKind::Add:
        case ExprKind::Sub: return 1;
        case ExprKind::Mul:
        case ExprKind::Div: return 2;
        case ExprKind::Neg: return 3;
        case ExprKind::Pow: return 4;
        default: return 5;
    }
}

void render_number(std::ostringstream& out, Complex z) {
    auto real_str = [](double x) {
        std::ostringstream s;
        s.precision(17);
        s << x;
        return s.str();
    };
    if (z.imag() == 0.0) {
        if (z.real() < 0.0) {
            out << "(-" << real_str(-z.real()) << ")";
        } else {
            out << real_str(z.real());
        }
        return;
    }
    if (z.real() == 0.0) {
        if (z.imag() == 1.0) {
            out << "i";
        } else if (z.imag() == -1.0) {
            out << "(-i)";
        } else if (z.imag() < 0.0) {
            out << "(-" << real_str(-z.imag()) << "*i)";
        } else {
            out << "(" << real_str(z.imag()) << "*i)";
        }
        return;
    }
    out << "(" << real_str(z.real()) << (z.imag() < 0.0 ? "-" : "+")
        << real_str(std::abs(z.imag())) << "*i)";
}

void render_into(std::ostringstream& out, const ExprPtr& e, int parent_prec, bool right_operand) {
    const int prec = precedence_of(*e);
    const bool parens =
        prec < parent_prec ||
        (prec == parent_prec && right_operand &&
         (e->kind == ExprKind::Add || e->kind == ExprKind::Sub || e->kind == ExprKind::Mul ||
          e->kind == ExprKind::Div));
    if (parens) out << "(";
    switch (e->kind) {
        case ExprKind::Number: render_number(out, e->number); break;
        case ExprKind::Variable: out << e->name; break;
        case ExprKind::Neg:
            out << "-";
            render_into(out, e->lhs, precedence_of(*e), true);
            break;
        case ExprKind::Add:
            render_into(out, e->lhs, prec, false);
            out << " + ";
            render_into(out, e->rhs, prec, true);
            break;
        case ExprKind::Sub:
            render_into(out, e->lhs, prec, false);
            out << " - ";
            render_into(out, e->rhs, prec, true);
            break;
        case ExprKind::Mul:
            render_into(out, e->lhs, prec, false);
            out << "*";
            render_into(out, e->rhs, prec, true);
            break;
        case ExprKind::Div:
            render_into(out, e->lhs, prec, false);
            out << "/";
            render_into(out, e->rhs, prec, true);
            break;
        case ExprKind::Pow:
            render_into(out, e->lhs, prec + 1, false);
            out << "^";
            if (e->exponent < 0) {
                out << "-" << -e->exponent;
            } else {
                out << e->exponent;
            }
            break;
        case ExprKind::Call:
            out << e->name << "(";
            render_into(out, e->lhs, 0, false);
            out << ")";
            break;
    }
    if (parens) out << ")";
}

}  // namespace

std::string render(const ExprPtr& e) {
    std::ostringstream out;
    render_into(out, e, 0, false);
    return out.str();
}

std::string render(const Predicate& p) {
    std::ostringstream out;
    const char* ops[] = {" < ", " <= ", " > ", " >= ", " != ", " == "};
    for (std::size_t i = 0; i < p.terms.size(); ++i) {
        if (i) out << " && ";
        out << render(p.terms[i].lhs) << ops[static_cast<int>(p.terms[i].op)]
            << render(p.terms[i].rhs);
    }
    return out.str();
}

bool structurally_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprKind::Number: return a->number == b->number;
        case ExprKind::Variable: return a->name == b->name;
        case ExprKind::Neg: return structurally_equal(a->lhs, b->lhs);
        case ExprKind::Pow:
            return a->exponent == b->exponent && structurally_equal(a->lhs, b->lhs);
        case ExprKind::Call:
            return a->name == b->name && structurally_equal(a->lhs, b->lhs);
        default:
            return structurally_equal(a->lhs, b->lhs) && structurally_equal(a->rhs, b->rhs);
    }
}

// -- evaluation ---------------------------------------------------------------

Jet2 eval_jet(const ExprPtr& e, const JetEnv& env) {
    switch (e->kind) {
        case ExprKind::Number: {
            int dim = env.empty() ? 0 : env.begin()->second.dim();
            return Jet2::constant(dim, e->number);
        }
        case ExprKind::Variable: {
            auto it = env.find(e->name);
            if (it == env.end()) throw UnboundVariable("unbound variable: " + e->name);
            return it->second;
        }
        case ExprKind::Neg: return -eval_jet(e->lhs, env);
        case ExprKind::Add: return eval_jet(e->lhs, env) + eval_jet(e->rhs, env);
        case ExprKind::Sub: return eval_jet(e->lhs, env) - eval_jet(e->rhs, env);
        case ExprKind::Mul: return eval_jet(e->lhs, env) * eval_jet(e->rhs, env);
        case ExprKind::Div: return eval_jet(e->lhs, env) / eval_jet(e->rhs, env);
        case ExprKind::Pow: return pow(eval_jet(e->lhs, env), e->exponent);
        case ExprKind::Call: {
            const Jet2 a = eval_jet(e->lhs, env);
            if (e->name == "sin") return sin(a);
            if (e->name == "cos") return cos(a);
            if (e->name == "exp") return exp(a);
            if (e->name == "log") return log(a);
            if (e->name == "sqrt") return sqrt(a);
            if (e->name == "conj") return conj(a);
            if (e->name == "re") return real_part(a);
            if (e->name == "im") return imag_part(a);
            if (e->name == "abs") return abs_value(a);
            throw DomainError("unknown function: " + e->name);
        }
    }
    throw EvaluationError("corrupt expression node");
}

Complex eval_value(const ExprPtr& e, const ValueEnv& env) {
    switch (e->kind) {
        case ExprKind::Number: return e->number;
        case ExprKind::Variable: {
            auto it = env.find(e->name);
            if (it == env.end()) throw UnboundVariable("unbound variable: " + e->name);
            return it->second;
        }
        case ExprKind::Neg: return -eval_value(e->lhs, env);
        case ExprKind::Add: return eval_value(e->lhs, env) + eval_value(e->rhs, env);
        case ExprKind::Sub: return eval_value(e->lhs, env) - eval_value(e->rhs, env);
        case ExprKind::Mul: return eval_value(e->lhs, env) * eval_value(e->rhs, env);
        case ExprKind::Div: {
            const Complex d = eval_value(e->rhs, env);
            if (std::abs(d) < 1e-14) throw DomainError("division by near-zero value");
            return eval_value(e->lhs, env) / d;
        }
        case ExprKind::Pow: {
            const Complex base = eval_value(e->lhs, env);
            long k = e->exponent;
            if (k < 0 && std::abs(base) < 1e-14)
                throw DomainError("negative power of near-zero value");
            Complex acc = 1.0, b = base;
            long m = std::labs(k);
            while (m > 0) {
                if (m & 1) acc *= b;
                m >>= 1;
                if (m > 0) b *= b;
            }
            return k < 0 ? 1.0 / acc : acc;
        }
        case ExprKind::Call: {
            const Complex a = eval_value(e->lhs, env);
            if (e->name == "sin") return std::sin(a);
            if (e->name == "cos") return std::cos(a);
            if (e->name == "exp") return std::exp(a);
            if (e->name == "log") {
                if (std::abs(a) < 1e-14) throw DomainError("log at branch point");
                return std::log(a);
            }
            if (e->name == "sqrt") {
                if (std::abs(a) < 1e-14) throw DomainError("sqrt at branch point");
                return std::sqrt(a);
            }
            if (e->name == "conj") return std::conj(a);
            if (e->name == "re") return Complex(a.real(), 0.0);
            if (e->name == "im") return Complex(a.imag(), 0.0);
            if (e->name == "abs") return Complex(std::abs(a), 0.0);
            throw DomainError("unknown function: " + e->name);
        }
    }
    throw EvaluationError("corrupt expression node");
}

// -- symbolic derivative -------------------------------------------------------

ExprPtr derivative(const ExprPtr& e, const std::string& variable) {
    switch (e->kind) {
        case ExprKind::Number: return num(0.0);
        case ExprKind::Variable: return num(e->name == variable ? 1.0 : 0.0);
        case ExprKind::Neg: return neg(derivative(e->lhs, variable));
        case ExprKind::Add: return add(derivative(e->lhs, variable), derivative(e->rhs, variable));
        case ExprKind::Sub: return sub(derivative(e->lhs, variable), derivative(e->rhs, variable));
        case ExprKind::Mul:
            return add(mul(derivative(e->lhs, variable), e->rhs),
                       mul(e->lhs, derivative(e->rhs, variable)));
        case ExprKind::Div:
            return div(sub(mul(derivative(e->lhs, variable), e->rhs),
                           mul(e->lhs, derivative(e->rhs, variable))),
                       pow(e->rhs, 2));
        case ExprKind::Pow:
            return mul(mul(num(static_cast<double>(e->exponent)), pow(e->lhs, e->exponent - 1)),
                       derivative(e->lhs, variable));
        case ExprKind::Call: {
            const ExprPtr da = derivative(e->lhs, variable);
            const ExprPtr& a = e->lhs;
            if (e->name == "sin") return mul(call("cos", a), da);
            if (e->name == "cos") return neg(mul(call("sin", a), da));
            if (e->name == "exp") return mul(call("exp", a), da);
            if (e->name == "log") return div(da, a);
            if (e->name == "sqrt") return div(da, mul(num(2.0), call("sqrt", a)));
            if (e->name == "conj") return call("conj", da);
            if (e->name == "re") return call("re", da);
            if (e->name == "im") return call("im", da);
            if (e->name == "abs")
                return div(call("re", mul(call("conj", a), da)), call("abs", a));
            throw DomainError("unknown function: " + e->name);
        }
    }
    throw EvaluationError("corrupt expression node");
}

ExprPtr substitute(const ExprPtr& e, const std::map<std::string, ExprPtr>& replacements) {
    switch (e->kind) {
        case ExprKind::Number: return e;
        case ExprKind::Variable: {
            auto it = replacements.find(e->name);
            return it == replacements.end() ? e : it->second;
        }
        case ExprKind::Neg:
            return make_node({.kind = ExprKind::Neg, .lhs = substitute(e->lhs, replacements)});
        case ExprKind::Pow:
            return make_node({.kind = ExprKind::Pow,
                              .exponent = e->exponent,
                              .lhs = substitute(e->lhs, replacements)});
        case ExprKind::Call:
            return make_node({.kind = ExprKind::Call,
                              .name = e->name,
                              .lhs = substitute(e->lhs, replacements)});
        default:
            return make_node({.kind = e->kind,
                              .lhs = substitute(e->lhs, replacements),
                              .rhs = substitute(e->rhs, replacements)});
    }
}

void collect_variables(const ExprPtr& e, std::vector<std::string>& out) {
    switch (e->kind) {
        case ExprKind::Number: return;
        case ExprKind::Variable: {
            for (const auto& s : out)
                if (s == e->name) return;
            out.push_back(e->name);
            return;
        }
        case ExprKind::Neg:
        case ExprKind::Pow:
        case ExprKind::Call: collect_variables(e->lhs, out); return;
        default:
            collect_variables(e->lhs, out);
            collect_variables(e->rhs, out);
            return;
    }
}

bool eval_predicate(const Predicate& p, const ValueEnv& env) {
    constexpr double kEqTol = 1e-9;
    for (const auto& c : p.terms) {
        const double l = eval_value(c.lhs, env).real();
        const double r = eval_value(c.rhs, env).real();
        bool ok = false;
        switch (c.op) {
            case CompareOp::LT: ok = l < r; break;
            case CompareOp::LE: ok = l <= r; break;
            case CompareOp::GT: ok = l > r; break;
            case CompareOp::GE: ok = l >= r; break;
            case CompareOp::NE: ok = std::abs(l - r) > kEqTol; break;
            case CompareOp::EQ: ok = std::abs(l - r) <= kEqTol; break;
        }
        if (!ok) return false;
    }
    return true;
}

}  // namespace hspace
