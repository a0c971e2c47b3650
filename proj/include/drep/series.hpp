#ifndef DREP_SERIES_HPP
#define DREP_SERIES_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <drep/errors.hpp>
#include <drep/rational.hpp>

namespace drep
{

// Marker for "no truncation in the outermost variable".
inline constexpr int kNoTruncation = std::numeric_limits<int>::max() / 4;

// Number of terms per level kept when an exact input produces an infinite
// expansion (inversion). Mutable process-wide default; the CLI sets it from
// --precision.
inline int &working_precision()
{
    static int precision = 32;
    return precision;
}

namespace detail
{

inline int clamp_order(long long v)
{
    if (v >= kNoTruncation / 2) {
        return kNoTruncation;
    }
    return static_cast<int>(v);
}

} // namespace detail

/// The field F_n = k((t_1))...((t_n)) with named variables.
struct TowerField {
    int level = 0;
    std::vector<std::string> names;

    static TowerField standard(int n)
    {
        TowerField f;
        f.level = n;
        for (int i = 1; i <= n; ++i) {
            f.names.push_back("t" + std::to_string(i));
        }
        return f;
    }

    void validate() const
    {
        if (level < 0) {
            throw DimensionMismatch("tower level must be non-negative");
        }
        if (static_cast<int>(names.size()) != level) {
            throw DimensionMismatch("expected " + std::to_string(level) + " variable names");
        }
        for (std::size_t i = 0; i < names.size(); ++i) {
            for (std::size_t j = i + 1; j < names.size(); ++j) {
                if (names[i] == names[j]) {
                    throw DimensionMismatch("duplicate variable name '" + names[i] + "'");
                }
            }
        }
    }

    bool operator==(const TowerField &) const = default;
};

/// Truncated element of F_n.
/**
 * A level-n element is a Laurent series in the outermost variable t_n whose
 * coefficients are level-(n-1) elements; level 0 wraps a Rational. The
 * coefficient of t_n^k is known for k < hi(); hi() == kNoTruncation means the
 * element is a Laurent polynomial in t_n (inner coefficients may still carry
 * their own truncation). Coefficients below lo() vanish. Only coefficients
 * that are not exactly zero are stored, so a stored coefficient may be "zero up
 * to precision" (an inner O-term).
 */
class Series
{
public:
    Series() = default;

    static Series zero(int level)
    {
        Series s;
        s.m_level = level;
        s.m_lo = 0;
        s.m_hi = level == 0 ? 0 : kNoTruncation;
        return s;
    }

    static Series constant(int level, const Rational &c)
    {
        if (level == 0) {
            Series s;
            s.m_scalar = c;
            return s;
        }
        Series s = zero(level);
        Series inner = constant(level - 1, c);
        if (!inner.is_exact_zero()) {
            s.m_coeffs.emplace(0, std::move(inner));
        }
        return s;
    }

    static Series one(int level)
    {
        return constant(level, Rational(1));
    }

    /// c * t_1^{exps[0]} ... t_n^{exps[n-1]}, exact.
    static Series monomial(int level, const std::vector<int> &exps, const Rational &c = Rational(1))
    {
        if (static_cast<int>(exps.size()) != level) {
            throw LevelMismatch("monomial exponent vector does not match level");
        }
        if (level == 0) {
            return constant(0, c);
        }
        if (c == 0) {
            return zero(level);
        }
        Series s = zero(level);
        std::vector<int> inner(exps.begin(), exps.end() - 1);
        s.m_coeffs.emplace(exps.back(), monomial(level - 1, inner, c));
        s.m_lo = exps.back();
        return s;
    }

    /// t_i as an element of F_level, 1 <= i <= level.
    static Series variable(int level, int i, int power = 1)
    {
        if (i < 1 || i > level) {
            throw IndexOutOfRange("variable index " + std::to_string(i) + " outside 1.." + std::to_string(level));
        }
        std::vector<int> e(level, 0);
        e[i - 1] = power;
        return monomial(level, e);
    }

    /// O(t_n^hi) with all lower coefficients zero.
    static Series big_oh(int level, int hi)
    {
        if (level == 0) {
            throw LevelMismatch("level-0 elements carry no truncation");
        }
        Series s = zero(level);
        s.m_hi = hi;
        s.m_lo = hi;
        return s;
    }

    /// Builds from outer coefficients; coefficients at or above hi are dropped.
    static Series from_coefficients(int level, std::map<int, Series> coeffs, int hi = kNoTruncation)
    {
        if (level == 0) {
            throw LevelMismatch("from_coefficients needs level >= 1");
        }
        Series s = zero(level);
        s.m_hi = hi;
        for (auto &[k, c] : coeffs) {
            if (c.m_level != level - 1) {
                throw LevelMismatch("coefficient level mismatch");
            }
            if (k < hi && !c.is_exact_zero()) {
                s.m_coeffs.emplace(k, std::move(c));
            }
        }
        s.reset_lo();
        return s;
    }

    /// Embeds an element of F_m into F_level (level >= m) as a constant in the outer variables.
    static Series lift(const Series &x, int level)
    {
        if (level < x.m_level) {
            throw LevelMismatch("cannot lift to a lower level");
        }
        if (level == x.m_level) {
            return x;
        }
        Series inner = lift(x, level - 1);
        Series s = zero(level);
        if (!inner.is_exact_zero()) {
            s.m_coeffs.emplace(0, std::move(inner));
        }
        return s;
    }

    int level() const noexcept
    {
        return m_level;
    }
    int lo() const noexcept
    {
        return m_lo;
    }
    int hi() const noexcept
    {
        return m_hi;
    }
    bool outer_exact() const noexcept
    {
        return m_level == 0 || m_hi == kNoTruncation;
    }
    const Rational &scalar() const
    {
        if (m_level != 0) {
            throw LevelMismatch("scalar() on a level-" + std::to_string(m_level) + " element");
        }
        return m_scalar;
    }
    const std::map<int, Series> &coefficients() const noexcept
    {
        return m_coeffs;
    }

    /// True when no truncation occurs at any level.
    bool exact() const
    {
        if (m_level == 0) {
            return true;
        }
        if (m_hi != kNoTruncation) {
            return false;
        }
        return std::all_of(m_coeffs.begin(), m_coeffs.end(), [](const auto &p) { return p.second.exact(); });
    }

    bool is_exact_zero() const
    {
        if (m_level == 0) {
            return m_scalar == 0;
        }
        return m_coeffs.empty() && m_hi == kNoTruncation;
    }

    /// No nonzero rational anywhere within the known windows.
    bool is_zero() const
    {
        if (m_level == 0) {
            return m_scalar == 0;
        }
        return std::all_of(m_coeffs.begin(), m_coeffs.end(), [](const auto &p) { return p.second.is_zero(); });
    }

    /// Coefficient of t_n^k.
    Series coefficient(int k) const
    {
        if (m_level == 0) {
            throw LevelMismatch("coefficient() on a level-0 element");
        }
        if (k >= m_hi) {
            throw InsufficientPrecision("coefficient of t" + std::to_string(m_level) + "^" + std::to_string(k)
                                        + " lies beyond the window (hi = " + std::to_string(m_hi) + ")");
        }
        auto it = m_coeffs.find(k);
        return it == m_coeffs.end() ? zero(m_level - 1) : it->second;
    }

    /// Lower bound for the t_n-order, sound for precision bookkeeping.
    int order_bound() const
    {
        if (m_level == 0) {
            return 0;
        }
        return m_coeffs.empty() ? m_hi : m_coeffs.begin()->first;
    }

    /// Certified valuation in t_n.
    int valuation() const
    {
        if (m_level == 0) {
            if (m_scalar == 0) {
                throw ZeroDivision("valuation of zero");
            }
            return 0;
        }
        for (const auto &[k, c] : m_coeffs) {
            if (!c.is_zero()) {
                return k;
            }
            throw UndeterminedLeadingTerm("coefficient of t" + std::to_string(m_level) + "^" + std::to_string(k)
                                          + " is zero only up to precision");
        }
        if (is_exact_zero()) {
            throw ZeroDivision("valuation of zero");
        }
        throw UndeterminedLeadingTerm("element vanishes on its whole window");
    }

    /// Valuation vector (t_1-order, ..., t_n-order) of the leading coefficient chain.
    std::vector<int> leading_exponents() const
    {
        std::vector<int> out;
        const Series *cur = this;
        while (cur->m_level > 0) {
            int v = cur->valuation();
            out.push_back(v);
            cur = &cur->m_coeffs.at(v);
        }
        std::reverse(out.begin(), out.end());
        return out;
    }

    Series truncated(int hi) const
    {
        if (m_level == 0 || hi >= m_hi) {
            return *this;
        }
        Series s = *this;
        s.m_hi = hi;
        s.m_coeffs.erase(s.m_coeffs.lower_bound(hi), s.m_coeffs.end());
        s.reset_lo();
        return s;
    }

    Series operator-() const
    {
        Series s = *this;
        s.negate_in_place();
        return s;
    }

    friend Series operator+(const Series &a, const Series &b)
    {
        check_levels(a, b);
        if (a.m_level == 0) {
            return constant(0, a.m_scalar + b.m_scalar);
        }
        Series s = zero(a.m_level);
        s.m_hi = std::min(a.m_hi, b.m_hi);
        auto ia = a.m_coeffs.begin();
        auto ib = b.m_coeffs.begin();
        while (ia != a.m_coeffs.end() || ib != b.m_coeffs.end()) {
            int k;
            Series c;
            if (ib == b.m_coeffs.end() || (ia != a.m_coeffs.end() && ia->first < ib->first)) {
                k = ia->first;
                c = ia->second;
                ++ia;
            } else if (ia == a.m_coeffs.end() || ib->first < ia->first) {
                k = ib->first;
                c = ib->second;
                ++ib;
            } else {
                k = ia->first;
                c = ia->second + ib->second;
                ++ia;
                ++ib;
            }
            if (k >= s.m_hi) {
                break;
            }
            if (!c.is_exact_zero()) {
                s.m_coeffs.emplace_hint(s.m_coeffs.end(), k, std::move(c));
            }
        }
        s.reset_lo();
        return s;
    }

    friend Series operator-(const Series &a, const Series &b)
    {
        return a + (-b);
    }

    friend Series operator*(const Series &a, const Series &b)
    {
        check_levels(a, b);
        if (a.m_level == 0) {
            return constant(0, a.m_scalar * b.m_scalar);
        }
        if (a.is_exact_zero() || b.is_exact_zero()) {
            return zero(a.m_level);
        }
        const long long ha = a.m_hi, hb = b.m_hi;
        const int hc = std::min(detail::clamp_order(a.order_bound() + hb), detail::clamp_order(b.order_bound() + ha));
        Series s = zero(a.m_level);
        s.m_hi = hc;
        std::map<int, Series> acc;
        for (const auto &[i, ai] : a.m_coeffs) {
            for (const auto &[j, bj] : b.m_coeffs) {
                const long long k = static_cast<long long>(i) + j;
                if (k >= hc) {
                    break;
                }
                auto it = acc.find(static_cast<int>(k));
                if (it == acc.end()) {
                    acc.emplace(static_cast<int>(k), ai * bj);
                } else {
                    it->second = it->second + ai * bj;
                }
            }
        }
        for (auto &[k, c] : acc) {
            if (!c.is_exact_zero()) {
                s.m_coeffs.emplace_hint(s.m_coeffs.end(), k, std::move(c));
            }
        }
        s.reset_lo();
        return s;
    }

    friend Series operator*(const Rational &q, const Series &a)
    {
        if (a.m_level == 0) {
            return constant(0, q * a.m_scalar);
        }
        if (q == 0) {
            Series s = zero(a.m_level);
            // 0 * (x + O(t^h)) is exactly zero.
            return s;
        }
        Series s = a;
        for (auto &[k, c] : s.m_coeffs) {
            c = q * c;
        }
        return s;
    }

    Series &operator+=(const Series &o)
    {
        return *this = *this + o;
    }
    Series &operator-=(const Series &o)
    {
        return *this = *this - o;
    }
    Series &operator*=(const Series &o)
    {
        return *this = *this * o;
    }

    /// Structural identity (same windows, same stored data).
    friend bool operator==(const Series &a, const Series &b)
    {
        if (a.m_level != b.m_level) {
            return false;
        }
        if (a.m_level == 0) {
            return a.m_scalar == b.m_scalar;
        }
        return a.m_hi == b.m_hi && a.m_coeffs == b.m_coeffs;
    }

    /// Multiplication by t_n^k.
    Series shifted(int k) const
    {
        if (m_level == 0 || k == 0) {
            return *this;
        }
        Series s = zero(m_level);
        s.m_hi = m_hi == kNoTruncation ? kNoTruncation : m_hi + k;
        for (const auto &[e, c] : m_coeffs) {
            s.m_coeffs.emplace_hint(s.m_coeffs.end(), e + k, c);
        }
        s.reset_lo();
        return s;
    }

    /// Substitution t_i -> c * t_i.
    Series scaled_variable(int i, const Rational &c) const
    {
        if (i < 1 || i > m_level) {
            throw IndexOutOfRange("variable index out of range in scaled_variable");
        }
        Series s = *this;
        for (auto &[k, coeff] : s.m_coeffs) {
            if (i == m_level) {
                Rational f = 1;
                mpq_class base = k >= 0 ? c : Rational(1) / c;
                for (int r = 0; r < std::abs(k); ++r) {
                    f *= base;
                }
                coeff = f * coeff;
            } else {
                coeff = coeff.scaled_variable(i, c);
            }
        }
        return s;
    }

private:
    static void check_levels(const Series &a, const Series &b)
    {
        if (a.m_level != b.m_level) {
            throw LevelMismatch("level " + std::to_string(a.m_level) + " vs level " + std::to_string(b.m_level));
        }
    }

    void negate_in_place()
    {
        if (m_level == 0) {
            m_scalar = -m_scalar;
            return;
        }
        for (auto &[k, c] : m_coeffs) {
            c.negate_in_place();
        }
    }

    void reset_lo()
    {
        if (m_level == 0) {
            return;
        }
        m_lo = m_coeffs.empty() ? std::min(m_hi, 0) : m_coeffs.begin()->first;
    }

    int m_level = 0;
    Rational m_scalar = 0;
    int m_lo = 0;
    int m_hi = 0;
    std::map<int, Series> m_coeffs;
};

/// Multiplicative inverse up to the guaranteed window.
inline Series invert(const Series &a)
{
    if (a.level() == 0) {
        if (a.scalar() == 0) {
            throw ZeroDivision("division by zero in k");
        }
        return Series::constant(0, Rational(1) / a.scalar());
    }
    const int v = a.valuation();
    const Series lead_inv = invert(a.coefficient(v));
    const bool monomial_like = a.outer_exact() && a.coefficients().size() == 1;
    if (monomial_like && lead_inv.exact()) {
        std::map<int, Series> c;
        c.emplace(-v, lead_inv);
        return Series::from_coefficients(a.level(), std::move(c));
    }
    const int rel = a.outer_exact() ? working_precision() : a.hi() - v;
    std::vector<Series> b;
    b.reserve(rel);
    std::vector<Series> tail; // tail[i] = coefficient of t^{v+i}
    tail.reserve(rel);
    for (int i = 0; i < rel; ++i) {
        auto it = a.coefficients().find(v + i);
        tail.push_back(it == a.coefficients().end() ? Series::zero(a.level() - 1) : it->second);
    }
    b.push_back(lead_inv);
    for (int j = 1; j < rel; ++j) {
        Series acc = Series::zero(a.level() - 1);
        for (int i = 1; i <= j; ++i) {
            if (!tail[i].is_exact_zero() && !b[j - i].is_exact_zero()) {
                acc += tail[i] * b[j - i];
            }
        }
        b.push_back(-(lead_inv * acc));
    }
    std::map<int, Series> c;
    for (int j = 0; j < rel; ++j) {
        c.emplace(-v + j, std::move(b[j]));
    }
    return Series::from_coefficients(a.level(), std::move(c), -v + rel);
}

inline Series operator/(const Series &a, const Series &b)
{
    return a * invert(b);
}

/// Partial derivative with respect to t_i, 1 <= i <= level.
inline Series derive(const Series &a, int i)
{
    if (i < 1 || i > a.level()) {
        throw IndexOutOfRange("derivation index " + std::to_string(i) + " outside 1.." + std::to_string(a.level()));
    }
    std::map<int, Series> c;
    if (i == a.level()) {
        for (const auto &[k, coeff] : a.coefficients()) {
            if (k != 0) {
                c.emplace(k - 1, Rational(k) * coeff);
            }
        }
        const int hi = a.outer_exact() ? kNoTruncation : a.hi() - 1;
        return Series::from_coefficients(a.level(), std::move(c), hi);
    }
    for (const auto &[k, coeff] : a.coefficients()) {
        c.emplace(k, derive(coeff, i));
    }
    return Series::from_coefficients(a.level(), std::move(c), a.hi());
}

/// Iterated residue of f dt_1 ^ ... ^ dt_n: the coefficient of (t_1 ... t_n)^{-1}.
inline Rational residue(const Series &f)
{
    if (f.level() == 0) {
        return f.scalar();
    }
    return residue(f.coefficient(-1));
}

/// Exact-equality judgement up to the common guaranteed window.
inline bool equal_up_to_precision(const Series &a, const Series &b)
{
    return (a - b).is_zero();
}

namespace detail
{

inline void collect_terms(const Series &s, std::vector<int> &outer, std::vector<std::pair<std::vector<int>, Rational>> &terms,
                          std::vector<std::pair<std::vector<int>, int>> &ohs)
{
    if (s.level() == 0) {
        if (s.scalar() != 0) {
            terms.emplace_back(outer, s.scalar());
        }
        return;
    }
    for (const auto &[k, c] : s.coefficients()) {
        outer.push_back(k);
        collect_terms(c, outer, terms, ohs);
        outer.pop_back();
    }
    if (!s.outer_exact()) {
        ohs.emplace_back(outer, s.hi());
    }
}

inline std::string monomial_text(const std::vector<int> &outer_first, const std::vector<std::string> &names)
{
    // outer_first[0] is the exponent of t_n.
    std::string out;
    const int n = static_cast<int>(outer_first.size());
    for (int i = 0; i < n; ++i) {
        const int e = outer_first[n - 1 - i];
        if (e == 0) {
            continue;
        }
        if (!out.empty()) {
            out += "*";
        }
        out += names[i];
        if (e != 1) {
            out += "^" + (e < 0 ? "(" + std::to_string(e) + ")" : std::to_string(e));
        }
    }
    return out;
}

} // namespace detail

/// Deterministic text form, e.g. "1 - t1^2 + O(t1^4)". Terms ascend in t_n, then t_{n-1}, ...
inline std::string to_string(const Series &s, const std::vector<std::string> &names)
{
    std::vector<int> outer;
    std::vector<std::pair<std::vector<int>, Rational>> terms;
    std::vector<std::pair<std::vector<int>, int>> ohs;
    detail::collect_terms(s, outer, terms, ohs);
    std::string out;
    for (const auto &[e, q] : terms) {
        const std::string mono = detail::monomial_text(e, names);
        Rational mag = abs(q);
        std::string body;
        if (mono.empty()) {
            body = to_string(mag);
        } else if (mag == 1) {
            body = mono;
        } else {
            body = to_string(mag) + "*" + mono;
        }
        if (out.empty()) {
            out = (q < 0 ? "-" : "") + body;
        } else {
            out += (q < 0 ? " - " : " + ") + body;
        }
    }
    for (const auto &[outer_prefix, hi] : ohs) {
        // O-term of the variable at depth outer_prefix.size(), times the fixed outer monomial.
        const int depth = static_cast<int>(outer_prefix.size());
        const int var = static_cast<int>(names.size()) - depth; // 1-based index of the truncated variable
        std::string o = "O(" + names[var - 1] + (hi == 1 ? "" : "^" + (hi < 0 ? "(" + std::to_string(hi) + ")" : std::to_string(hi))) + ")";
        std::string mono;
        for (int i = 0; i < depth; ++i) {
            const int e = outer_prefix[i];
            if (e == 0) {
                continue;
            }
            const std::string &nm = names[names.size() - 1 - i];
            mono = nm + (e == 1 ? "" : "^" + (e < 0 ? "(" + std::to_string(e) + ")" : std::to_string(e))) + (mono.empty() ? "" : "*" + mono);
        }
        if (!mono.empty()) {
            o += "*" + mono;
        }
        out += out.empty() ? o : " + " + o;
    }
    return out.empty() ? "0" : out;
}

inline std::string to_string(const Series &s)
{
    return to_string(s, TowerField::standard(s.level()).names);
}

/// Sum f_i dt_i over F_n.
struct OneForm {
    std::vector<Series> components;

    int level() const
    {
        return components.empty() ? 0 : components.front().level();
    }

    void validate() const
    {
        const int n = static_cast<int>(components.size());
        for (const auto &c : components) {
            if (c.level() != n) {
                throw LevelMismatch("one-form components must live in F_" + std::to_string(n));
            }
        }
    }

    OneForm operator-() const
    {
        OneForm w;
        for (const auto &c : components) {
            w.components.push_back(-c);
        }
        return w;
    }

    friend bool operator==(const OneForm &, const OneForm &) = default;
};

/// Coefficients of d(omega) on dt_i ^ dt_j (i < j), in lexicographic (i, j) order.
inline std::vector<Series> exterior_derivative(const OneForm &w)
{
    w.validate();
    const int n = static_cast<int>(w.components.size());
    std::vector<Series> out;
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            out.push_back(derive(w.components[j - 1], i) - derive(w.components[i - 1], j));
        }
    }
    return out;
}

/// Throws NotClosed when d(omega) is certified nonzero.
inline void require_closed(const OneForm &w)
{
    for (const auto &c : exterior_derivative(w)) {
        if (!c.is_zero()) {
            throw NotClosed("d(nu) = " + to_string(c) + " != 0");
        }
    }
}

} // namespace drep

#endif
