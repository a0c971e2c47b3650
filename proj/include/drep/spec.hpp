#ifndef DREP_SPEC_HPP
#define DREP_SPEC_HPP

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <drep/connection.hpp>
#include <drep/derham.hpp>
#include <drep/errors.hpp>
#include <drep/expression.hpp>

namespace drep
{

using ExprMatrix = std::vector<std::vector<Expr>>;

struct TaskSpec {
    std::string command;
    int sigma = 1;
    int cover = 2;
    bool det = false;

    bool operator==(const TaskSpec &) const = default;
};

/// Parsed input file.
/**
 *   [field]       n, variables (optional), precision (optional)
 *   [connection]  rank, A1 .. An as matrices of quoted expressions
 *   [forms]       nu1 .. nun as rows of quoted components (block optional)
 *   [task]        command, sigma, cover, det
 * '#' outside quotes starts a comment. A value whose brackets are open at the
 * end of a line continues on the next line.
 */
struct SpecFile {
    TowerField field;
    std::optional<int> precision;
    int rank = 0;
    std::vector<ExprMatrix> a;
    std::vector<std::vector<Expr>> forms; // empty: standard frame dt_i
    TaskSpec task;

    bool operator==(const SpecFile &) const = default;
};

inline const std::set<std::string> &spec_commands()
{
    static const std::set<std::string> c{"cohomology", "irregularity", "cyclic", "epsilon", "verify"};
    return c;
}

namespace detail
{

struct RawValue {
    std::string key;
    SourcePos key_pos;
    SourceText text;
};

inline std::string trimmed(const std::string &s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
        ++a;
    }
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
        --b;
    }
    return s.substr(a, b - a);
}

// Bracket depth outside quotes; the state carries across continuation lines.
inline int bracket_balance(const std::string &s, bool &in_quote)
{
    int depth = 0;
    for (char c : s) {
        if (c == '"') {
            in_quote = !in_quote;
        } else if (!in_quote && c == '[') {
            ++depth;
        } else if (!in_quote && c == ']') {
            --depth;
        }
    }
    return depth;
}

class ValueReader
{
public:
    explicit ValueReader(const RawValue &v) : m_v(v) {}

    [[noreturn]] void fail(const std::string &msg) const
    {
        const SourcePos p = m_v.text.at(m_i);
        throw SyntaxError(msg, p.line, p.column);
    }

    void skip()
    {
        while (m_i < m_v.text.chars.size() && std::isspace(static_cast<unsigned char>(m_v.text.chars[m_i]))) {
            ++m_i;
        }
    }

    bool at_end()
    {
        skip();
        return m_i >= m_v.text.chars.size();
    }

    void expect_end()
    {
        if (!at_end()) {
            fail("unexpected trailing text");
        }
    }

    bool accept(char c)
    {
        skip();
        if (m_i < m_v.text.chars.size() && m_v.text.chars[m_i] == c) {
            ++m_i;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    std::string word()
    {
        skip();
        const std::size_t start = m_i;
        while (m_i < m_v.text.chars.size()) {
            const char c = m_v.text.chars[m_i];
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '+')) {
                break;
            }
            ++m_i;
        }
        if (start == m_i) {
            fail("expected a value");
        }
        return m_v.text.chars.substr(start, m_i - start);
    }

    long integer()
    {
        skip();
        const std::size_t start = m_i;
        const std::string w = word();
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(w, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != w.size()) {
            m_i = start;
            fail("expected an integer");
        }
        return v;
    }

    Expr quoted_expression()
    {
        skip();
        if (!accept('"')) {
            fail("expected a quoted expression");
        }
        SourceText inner;
        const std::size_t start = m_i;
        while (m_i < m_v.text.chars.size() && m_v.text.chars[m_i] != '"') {
            inner.chars.push_back(m_v.text.chars[m_i]);
            inner.pos.push_back(m_v.text.at(m_i));
            ++m_i;
        }
        if (m_i >= m_v.text.chars.size()) {
            m_i = start - 1;
            fail("unterminated string");
        }
        inner.end = m_v.text.at(m_i);
        ++m_i;
        return parse_expression(inner);
    }

    std::vector<Expr> row()
    {
        expect('[');
        std::vector<Expr> out;
        if (accept(']')) {
            return out;
        }
        do {
            out.push_back(quoted_expression());
        } while (accept(','));
        expect(']');
        return out;
    }

    ExprMatrix matrix()
    {
        expect('[');
        ExprMatrix out;
        if (accept(']')) {
            return out;
        }
        do {
            out.push_back(row());
        } while (accept(','));
        expect(']');
        return out;
    }

private:
    const RawValue &m_v;
    std::size_t m_i = 0;
};

inline int key_index(const std::string &key, const std::string &prefix)
{
    if (key.size() <= prefix.size() || key.compare(0, prefix.size(), prefix) != 0) {
        return 0;
    }
    const std::string rest = key.substr(prefix.size());
    if (rest.size() > 3 || rest[0] == '0') {
        return 0;
    }
    for (char c : rest) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            return 0;
        }
    }
    return std::stoi(rest);
}

[[noreturn]] inline void unknown_key(const RawValue &v, const std::string &section)
{
    throw UnknownKey("unknown key '" + v.key + "' in [" + section + "] at " + std::to_string(v.key_pos.line) + ":"
                     + std::to_string(v.key_pos.column));
}

} // namespace detail

/// Parses and validates; errors carry line:column.
inline SpecFile parse_spec(const std::string &text)
{
    using detail::RawValue;
    std::vector<std::string> lines;
    {
        std::istringstream in(text);
        std::string l;
        while (std::getline(in, l)) {
            if (!l.empty() && l.back() == '\r') {
                l.pop_back();
            }
            // '#' outside quotes starts a comment; columns before it are unchanged.
            bool quoted = false;
            for (std::size_t k = 0; k < l.size(); ++k) {
                if (l[k] == '"') {
                    quoted = !quoted;
                } else if (l[k] == '#' && !quoted) {
                    l.erase(k);
                    break;
                }
            }
            lines.push_back(l);
        }
    }
    std::map<std::string, std::vector<RawValue>> sections;
    std::map<std::string, SourcePos> section_pos;
    std::string current;
    std::set<std::string> seen_keys;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const std::string &line = lines[li];
        const int lineno = static_cast<int>(li) + 1;
        const std::string t = detail::trimmed(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        const int indent = static_cast<int>(line.find_first_not_of(" \t")) + 1;
        if (t[0] == '[') {
            if (t.back() != ']' || t.size() < 3) {
                throw SyntaxError("malformed section header", lineno, indent);
            }
            current = detail::trimmed(t.substr(1, t.size() - 2));
            if (current != "field" && current != "connection" && current != "forms" && current != "task") {
                throw UnknownKey("unknown section [" + current + "] at " + std::to_string(lineno) + ":"
                                 + std::to_string(indent));
            }
            if (sections.count(current)) {
                throw SyntaxError("duplicate section [" + current + "]", lineno, indent);
            }
            sections[current];
            section_pos[current] = {lineno, indent};
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw SyntaxError("expected 'key = value'", lineno, indent);
        }
        if (current.empty()) {
            throw SyntaxError("entry outside of a section", lineno, indent);
        }
        RawValue v;
        v.key = detail::trimmed(line.substr(0, eq));
        v.key_pos = {lineno, indent};
        if (v.key.empty()) {
            throw SyntaxError("missing key", lineno, indent);
        }
        if (!seen_keys.insert(current + "." + v.key).second) {
            throw SyntaxError("duplicate key '" + v.key + "'", lineno, indent);
        }
        bool in_quote = false;
        std::size_t l = li;
        std::size_t col = eq + 1;
        int depth = 0;
        for (;;) {
            const std::string part = lines[l].substr(col);
            depth += detail::bracket_balance(part, in_quote);
            for (std::size_t k = 0; k < part.size(); ++k) {
                v.text.chars.push_back(part[k]);
                v.text.pos.push_back({static_cast<int>(l) + 1, static_cast<int>(col + k) + 1});
            }
            v.text.end = {static_cast<int>(l) + 1, static_cast<int>(lines[l].size()) + 1};
            if (depth <= 0 || in_quote || l + 1 >= lines.size()) {
                break;
            }
            ++l;
            col = 0;
            v.text.chars.push_back('\n');
            v.text.pos.push_back({static_cast<int>(l) + 1, 1});
        }
        li = l;
        sections[current].push_back(std::move(v));
    }

    SpecFile s;
    auto require_section = [&](const std::string &name) -> const std::vector<RawValue> & {
        auto it = sections.find(name);
        if (it == sections.end()) {
            throw SyntaxError("missing section [" + name + "]", static_cast<int>(lines.size()) + 1, 1);
        }
        return it->second;
    };

    // [field]
    {
        bool have_n = false;
        std::vector<std::string> names;
        const RawValue *names_at = nullptr;
        for (const auto &v : require_section("field")) {
            detail::ValueReader r(v);
            if (v.key == "n") {
                s.field.level = static_cast<int>(r.integer());
                have_n = true;
            } else if (v.key == "variables") {
                do {
                    names.push_back(r.word());
                } while (r.accept(','));
                names_at = &v;
            } else if (v.key == "precision") {
                s.precision = static_cast<int>(r.integer());
                if (*s.precision < 1) {
                    throw DimensionMismatch("precision must be positive");
                }
            } else {
                detail::unknown_key(v, "field");
            }
            r.expect_end();
        }
        if (!have_n) {
            const SourcePos p = section_pos["field"];
            throw SyntaxError("missing key 'n'", p.line, p.column);
        }
        if (s.field.level < 1 || s.field.level > 8) {
            throw DimensionMismatch("n must be between 1 and 8");
        }
        if (names_at) {
            s.field.names = names;
        } else {
            s.field.names = TowerField::standard(s.field.level).names;
        }
        s.field.validate();
    }

    // [connection]
    {
        const int n = s.field.level;
        std::vector<std::optional<ExprMatrix>> mats(n);
        bool have_rank = false;
        for (const auto &v : require_section("connection")) {
            detail::ValueReader r(v);
            if (v.key == "rank") {
                s.rank = static_cast<int>(r.integer());
                have_rank = true;
            } else if (const int i = detail::key_index(v.key, "A"); i >= 1 && i <= n) {
                mats[i - 1] = r.matrix();
            } else {
                detail::unknown_key(v, "connection");
            }
            r.expect_end();
        }
        if (!have_rank) {
            const SourcePos p = section_pos["connection"];
            throw SyntaxError("missing key 'rank'", p.line, p.column);
        }
        if (s.rank < 1) {
            throw DimensionMismatch("rank must be positive");
        }
        for (int i = 0; i < n; ++i) {
            if (!mats[i]) {
                throw DimensionMismatch("missing matrix A" + std::to_string(i + 1));
            }
            const ExprMatrix &m = *mats[i];
            if (static_cast<int>(m.size()) != s.rank) {
                throw DimensionMismatch("A" + std::to_string(i + 1) + " has " + std::to_string(m.size())
                                        + " rows, rank is " + std::to_string(s.rank));
            }
            for (const auto &row : m) {
                if (static_cast<int>(row.size()) != s.rank) {
                    throw DimensionMismatch("A" + std::to_string(i + 1) + " has a row of length "
                                            + std::to_string(row.size()) + ", rank is " + std::to_string(s.rank));
                }
            }
            s.a.push_back(m);
        }
    }

    // [forms]
    if (sections.count("forms")) {
        const int n = s.field.level;
        std::vector<std::optional<std::vector<Expr>>> nus(n);
        for (const auto &v : sections["forms"]) {
            detail::ValueReader r(v);
            if (const int i = detail::key_index(v.key, "nu"); i >= 1 && i <= n) {
                nus[i - 1] = r.row();
            } else {
                detail::unknown_key(v, "forms");
            }
            r.expect_end();
        }
        for (int i = 0; i < n; ++i) {
            if (!nus[i]) {
                throw DimensionMismatch("missing form nu" + std::to_string(i + 1));
            }
            if (static_cast<int>(nus[i]->size()) != n) {
                throw DimensionMismatch("nu" + std::to_string(i + 1) + " has " + std::to_string(nus[i]->size())
                                        + " components, n is " + std::to_string(n));
            }
            s.forms.push_back(*nus[i]);
        }
    }

    // [task]
    {
        bool have_command = false;
        for (const auto &v : require_section("task")) {
            detail::ValueReader r(v);
            if (v.key == "command") {
                s.task.command = r.word();
                if (!spec_commands().count(s.task.command)) {
                    throw UnknownKey("unknown command '" + s.task.command + "' at " + std::to_string(v.key_pos.line)
                                     + ":" + std::to_string(v.key_pos.column));
                }
                have_command = true;
            } else if (v.key == "sigma") {
                s.task.sigma = static_cast<int>(r.integer());
                if (s.task.sigma != 1 && s.task.sigma != -1) {
                    throw DimensionMismatch("sigma must be 1 or -1");
                }
            } else if (v.key == "cover") {
                s.task.cover = static_cast<int>(r.integer());
                if (s.task.cover < 1) {
                    throw DimensionMismatch("cover must be positive");
                }
            } else if (v.key == "det") {
                const std::string w = r.word();
                if (w != "true" && w != "false") {
                    throw SyntaxError("expected true or false", v.key_pos.line, v.key_pos.column);
                }
                s.task.det = w == "true";
            } else {
                detail::unknown_key(v, "task");
            }
            r.expect_end();
        }
        if (!have_command) {
            const SourcePos p = section_pos["task"];
            throw SyntaxError("missing key 'command'", p.line, p.column);
        }
    }
    return s;
}

/// Canonical text; parse_spec(to_string(s)) == s.
inline std::string to_string(const SpecFile &s)
{
    std::ostringstream out;
    auto row = [](const std::vector<Expr> &r) {
        std::string t = "[";
        for (std::size_t j = 0; j < r.size(); ++j) {
            t += (j ? ", \"" : "\"") + to_string(r[j]) + "\"";
        }
        return t + "]";
    };
    out << "[field]\n";
    out << "n = " << s.field.level << "\n";
    out << "variables = ";
    for (std::size_t i = 0; i < s.field.names.size(); ++i) {
        out << (i ? ", " : "") << s.field.names[i];
    }
    out << "\n";
    if (s.precision) {
        out << "precision = " << *s.precision << "\n";
    }
    out << "\n[connection]\nrank = " << s.rank << "\n";
    for (std::size_t i = 0; i < s.a.size(); ++i) {
        out << "A" << i + 1 << " = [";
        for (std::size_t r = 0; r < s.a[i].size(); ++r) {
            out << (r ? ", " : "") << row(s.a[i][r]);
        }
        out << "]\n";
    }
    if (!s.forms.empty()) {
        out << "\n[forms]\n";
        for (std::size_t i = 0; i < s.forms.size(); ++i) {
            out << "nu" << i + 1 << " = " << row(s.forms[i]) << "\n";
        }
    }
    out << "\n[task]\ncommand = " << s.task.command << "\n";
    out << "sigma = " << s.task.sigma << "\n";
    out << "cover = " << s.task.cover << "\n";
    out << "det = " << (s.task.det ? "true" : "false") << "\n";
    return out.str();
}

inline Connection to_connection(const SpecFile &s)
{
    Connection c = Connection::trivial(s.field, s.rank);
    for (int i = 0; i < s.field.level; ++i) {
        for (int r = 0; r < s.rank; ++r) {
            for (int q = 0; q < s.rank; ++q) {
                c.a[i](r, q) = evaluate(s.a[i][r][q], s.field);
            }
        }
    }
    c.validate();
    return c;
}

inline FormTuple to_forms(const SpecFile &s)
{
    if (s.forms.empty()) {
        return FormTuple::standard(s.field.level);
    }
    FormTuple nu;
    for (const auto &row : s.forms) {
        OneForm w;
        for (const auto &e : row) {
            w.components.push_back(evaluate(e, s.field));
        }
        nu.nu.push_back(std::move(w));
    }
    return nu;
}

} // namespace drep

#endif
