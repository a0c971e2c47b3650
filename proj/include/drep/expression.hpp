#ifndef DREP_EXPRESSION_HPP
#define DREP_EXPRESSION_HPP

#include <cctype>
#include <memory>
#include <string>
#include <vector>

#include <drep/errors.hpp>
#include <drep/rational.hpp>
#include <drep/series.hpp>

namespace drep
{

/// Position of a character in the source file, 1-based.
struct SourcePos {
    int line = 1;
    int column = 1;
};

/// Arithmetic over rationals and the field variables.
/**
 * Grammar:
 *   expr  := term (("+" | "-") term)*
 *   term  := unary (("*" | "/") unary)*
 *   unary := "-" unary | power
 *   power := atom ("^" exponent)?
 *   exponent := "-"? integer | "(" "-"? integer ")"
 *   atom  := integer | name | "(" expr ")"
 * Literals are non-negative integers; 1/2 is a quotient.
 */
struct Expr {
    enum class Kind { integer, variable, negate, add, sub, mul, div, power };

    Kind kind = Kind::integer;
    Rational value;   // integer
    std::string name; // variable
    long exponent = 0;
    std::vector<Expr> args;
    SourcePos pos; // not part of equality

    static Expr integer(const Rational &v)
    {
        Expr e;
        e.value = v;
        return e;
    }

    static Expr variable(std::string n)
    {
        Expr e;
        e.kind = Kind::variable;
        e.name = std::move(n);
        return e;
    }

    static Expr node(Kind k, std::vector<Expr> args, long exponent = 0)
    {
        Expr e;
        e.kind = k;
        e.args = std::move(args);
        e.exponent = exponent;
        return e;
    }

    bool operator==(const Expr &o) const
    {
        return kind == o.kind && value == o.value && name == o.name && exponent == o.exponent && args == o.args;
    }
};

namespace detail
{

// Characters of one value with their file positions.
struct SourceText {
    std::string chars;
    std::vector<SourcePos> pos;
    SourcePos end;

    SourcePos at(std::size_t i) const
    {
        return i < pos.size() ? pos[i] : end;
    }
};

class ExprParser
{
public:
    explicit ExprParser(const SourceText &src) : m_src(src) {}

    Expr parse_all()
    {
        skip();
        if (done()) {
            fail("empty expression", m_i);
        }
        Expr e = expr();
        skip();
        if (!done()) {
            fail(std::string("unexpected '") + peek() + "'", m_i);
        }
        return e;
    }

private:
    const SourceText &m_src;
    std::size_t m_i = 0;

    [[noreturn]] void fail(const std::string &msg, std::size_t i) const
    {
        const SourcePos p = m_src.at(i);
        throw SyntaxError(msg, p.line, p.column);
    }

    bool done() const
    {
        return m_i >= m_src.chars.size();
    }

    char peek() const
    {
        return done() ? '\0' : m_src.chars[m_i];
    }

    void skip()
    {
        while (!done() && std::isspace(static_cast<unsigned char>(peek()))) {
            ++m_i;
        }
    }

    bool accept(char c)
    {
        skip();
        if (peek() == c) {
            ++m_i;
            return true;
        }
        return false;
    }

    Expr expr()
    {
        Expr lhs = term();
        for (;;) {
            skip();
            const std::size_t at = m_i;
            Expr::Kind k;
            if (accept('+')) {
                k = Expr::Kind::add;
            } else if (accept('-')) {
                k = Expr::Kind::sub;
            } else {
                return lhs;
            }
            Expr e = Expr::node(k, {std::move(lhs), term()});
            e.pos = m_src.at(at);
            lhs = std::move(e);
        }
    }

    Expr term()
    {
        Expr lhs = unary();
        for (;;) {
            skip();
            const std::size_t at = m_i;
            Expr::Kind k;
            if (accept('*')) {
                k = Expr::Kind::mul;
            } else if (accept('/')) {
                k = Expr::Kind::div;
            } else {
                return lhs;
            }
            Expr e = Expr::node(k, {std::move(lhs), unary()});
            e.pos = m_src.at(at);
            lhs = std::move(e);
        }
    }

    Expr unary()
    {
        skip();
        const std::size_t at = m_i;
        if (accept('-')) {
            Expr e = Expr::node(Expr::Kind::negate, {unary()});
            e.pos = m_src.at(at);
            return e;
        }
        return power();
    }

    long exponent()
    {
        skip();
        const std::size_t at = m_i;
        const bool paren = accept('(');
        const bool neg = accept('-');
        skip();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) {
            fail("expected an integer exponent", m_i);
        }
        const std::size_t start = m_i;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            ++m_i;
        }
        if (m_i - start > 6) {
            fail("exponent too large", start);
        }
        long v = std::stol(m_src.chars.substr(start, m_i - start));
        if (paren && !accept(')')) {
            fail("unclosed '('", at);
        }
        return neg ? -v : v;
    }

    Expr power()
    {
        Expr base = atom();
        skip();
        const std::size_t at = m_i;
        if (accept('^')) {
            Expr e = Expr::node(Expr::Kind::power, {std::move(base)}, exponent());
            e.pos = m_src.at(at);
            return e;
        }
        return base;
    }

    Expr atom()
    {
        skip();
        const std::size_t at = m_i;
        if (done()) {
            fail("expected an expression", m_i);
        }
        const char c = peek();
        if (c == '(') {
            ++m_i;
            skip();
            if (done()) {
                fail("unclosed '('", at);
            }
            Expr e = expr();
            if (!accept(')')) {
                fail("unclosed '('", at);
            }
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                ++m_i;
            }
            Expr e = Expr::integer(Rational(m_src.chars.substr(at, m_i - at)));
            e.pos = m_src.at(at);
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
                ++m_i;
            }
            Expr e = Expr::variable(m_src.chars.substr(at, m_i - at));
            e.pos = m_src.at(at);
            return e;
        }
        fail(std::string("unexpected '") + c + "'", at);
    }
};

inline int precedence(const Expr &e)
{
    switch (e.kind) {
    case Expr::Kind::add:
    case Expr::Kind::sub:
        return 1;
    case Expr::Kind::mul:
    case Expr::Kind::div:
        return 2;
    case Expr::Kind::negate:
        return 3;
    case Expr::Kind::power:
        return 4;
    default:
        return 5;
    }
}

} // namespace detail

inline Expr parse_expression(const detail::SourceText &src)
{
    return detail::ExprParser(src).parse_all();
}

/// Parses a standalone expression; positions are columns of `text` on line 1.
inline Expr parse_expression(const std::string &text)
{
    detail::SourceText src;
    src.chars = text;
    for (std::size_t i = 0; i < text.size(); ++i) {
        src.pos.push_back({1, static_cast<int>(i) + 1});
    }
    src.end = {1, static_cast<int>(text.size()) + 1};
    return parse_expression(src);
}

/// Text that parses back to the same tree.
inline std::string to_string(const Expr &e)
{
    using K = Expr::Kind;
    auto wrap = [](const Expr &x, int min_prec) {
        const std::string s = to_string(x);
        return detail::precedence(x) < min_prec ? "(" + s + ")" : s;
    };
    const int p = detail::precedence(e);
    switch (e.kind) {
    case K::integer:
        return e.value.get_str();
    case K::variable:
        return e.name;
    case K::negate:
        return "-" + wrap(e.args[0], 3);
    case K::power:
        return wrap(e.args[0], 5) + "^" + (e.exponent < 0 ? "(" + std::to_string(e.exponent) + ")" : std::to_string(e.exponent));
    default:
        break;
    }
    const char *op = e.kind == K::add ? " + " : e.kind == K::sub ? " - " : e.kind == K::mul ? "*" : "/";
    // Left-associative: the right operand needs strictly higher precedence.
    return wrap(e.args[0], p) + op + wrap(e.args[1], p + 1);
}

/// Value in F_n; variable names index the tower.
inline Series evaluate(const Expr &e, const TowerField &field)
{
    using K = Expr::Kind;
    const int n = field.level;
    switch (e.kind) {
    case K::integer:
        return Series::constant(n, e.value);
    case K::variable:
        for (int i = 0; i < n; ++i) {
            if (field.names[i] == e.name) {
                return Series::variable(n, i + 1);
            }
        }
        throw SyntaxError("unknown variable '" + e.name + "'", e.pos.line, e.pos.column);
    case K::negate:
        return -evaluate(e.args[0], field);
    case K::add:
        return evaluate(e.args[0], field) + evaluate(e.args[1], field);
    case K::sub:
        return evaluate(e.args[0], field) - evaluate(e.args[1], field);
    case K::mul:
        return evaluate(e.args[0], field) * evaluate(e.args[1], field);
    case K::div: {
        const Series num = evaluate(e.args[0], field);
        const Series den = evaluate(e.args[1], field);
        if (den.is_exact_zero()) {
            throw ZeroDivision("division by zero at " + std::to_string(e.pos.line) + ":" + std::to_string(e.pos.column));
        }
        return num / den;
    }
    case K::power: {
        Series base = evaluate(e.args[0], field);
        if (e.exponent < 0) {
            if (base.is_exact_zero()) {
                throw ZeroDivision("negative power of zero at " + std::to_string(e.pos.line) + ":"
                                   + std::to_string(e.pos.column));
            }
            base = invert(base);
        }
        Series acc = Series::one(n);
        for (long k = 0; k < (e.exponent < 0 ? -e.exponent : e.exponent); ++k) {
            acc = acc * base;
        }
        return acc;
    }
    }
    return Series::zero(n);
}

} // namespace drep

#endif
