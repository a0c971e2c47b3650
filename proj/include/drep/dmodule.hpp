#ifndef DREP_DMODULE_HPP
#define DREP_DMODULE_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <drep/connection.hpp>
#include <drep/errors.hpp>
#include <drep/matrix.hpp>
#include <drep/series.hpp>
#include <drep/window.hpp>

namespace drep
{

namespace detail
{

inline void require_level_one(const Series &x, const char *what)
{
    if (x.level() != 1) {
        throw LevelMismatch(std::string(what) + " works over k((t)) only");
    }
}

// Signed Stirling numbers of the first kind: x(x-1)...(x-n+1) = sum_k s(n,k) x^k.
inline std::vector<std::vector<Integer>> stirling_first(int n)
{
    std::vector<std::vector<Integer>> s(n + 1, std::vector<Integer>(n + 1, 0));
    s[0][0] = 1;
    for (int i = 1; i <= n; ++i) {
        for (int k = 1; k <= i; ++k) {
            s[i][k] = s[i - 1][k - 1] - (i - 1) * s[i - 1][k];
        }
    }
    return s;
}

// Stirling numbers of the second kind: x^n = sum_k S(n,k) x(x-1)...(x-k+1).
inline std::vector<std::vector<Integer>> stirling_second(int n)
{
    std::vector<std::vector<Integer>> s(n + 1, std::vector<Integer>(n + 1, 0));
    s[0][0] = 1;
    for (int i = 1; i <= n; ++i) {
        for (int k = 1; k <= i; ++k) {
            s[i][k] = k * s[i - 1][k] + s[i - 1][k - 1];
        }
    }
    return s;
}

inline Series nth_derivative(Series y, int k)
{
    for (int i = 0; i < k; ++i) {
        y = derive(y, 1);
    }
    return y;
}

} // namespace detail

/// det (y_i^{(j-1)}).
inline Series wronskian(const std::vector<Series> &ys)
{
    const std::size_t m = ys.size();
    if (m == 0) {
        return Series::one(1);
    }
    for (const auto &y : ys) {
        detail::require_level_one(y, "wronskian");
    }
    SeriesMatrix w(m, m, Series::zero(1));
    for (std::size_t i = 0; i < m; ++i) {
        Series d = ys[i];
        for (std::size_t j = 0; j < m; ++j) {
            w(i, j) = d;
            if (j + 1 < m) {
                d = derive(d, 1);
            }
        }
    }
    return determinant(w, Series::zero(1));
}

enum class OperatorForm { d, theta };

/// Monic scalar operator sum_i a_i D^i with D = d/dt or theta = t d/dt.
struct ScalarOperator {
    OperatorForm form = OperatorForm::d;
    std::vector<Series> coeffs; // a_0..a_m, a_m = 1

    int order() const
    {
        return static_cast<int>(coeffs.size()) - 1;
    }

    void validate() const
    {
        if (order() < 1) {
            throw DimensionMismatch("scalar operator must have order >= 1");
        }
        for (const auto &c : coeffs) {
            detail::require_level_one(c, "scalar operator");
        }
        if (!(coeffs.back() == Series::one(1))) {
            throw DimensionMismatch("scalar operator must be monic");
        }
    }

    Series operator()(const Series &y) const
    {
        Series out = Series::zero(1);
        Series d = y;
        for (int i = 0; i <= order(); ++i) {
            if (!coeffs[i].is_exact_zero()) {
                out += coeffs[i] * d;
            }
            if (i < order()) {
                d = form == OperatorForm::d ? derive(d, 1) : Series::variable(1, 1) * derive(d, 1);
            }
        }
        return out;
    }

    /// Rank-one k-linear operator for the window model; the shift is the
    /// least exponent displacement of any term.
    LinearOp as_linear_op() const
    {
        int shift = 0;
        bool first = true;
        for (int i = 0; i <= order(); ++i) {
            if (coeffs[i].is_exact_zero()) {
                continue;
            }
            const int v = coeffs[i].order_bound() - (form == OperatorForm::d ? i : 0);
            shift = first ? v : std::min(shift, v);
            first = false;
        }
        LinearOp op;
        op.level = 1;
        op.shift = {shift};
        const ScalarOperator self = *this;
        op.apply = [self](const std::vector<Series> &v) { return std::vector<Series>{self(v[0])}; };
        return op;
    }

    friend bool operator==(const ScalarOperator &, const ScalarOperator &) = default;
};

/// t^m L written in theta; the solution space is unchanged.
inline ScalarOperator to_theta_form(const ScalarOperator &l)
{
    if (l.form == OperatorForm::theta) {
        return l;
    }
    const int m = l.order();
    const auto s = detail::stirling_first(m);
    ScalarOperator out;
    out.form = OperatorForm::theta;
    out.coeffs.assign(m + 1, Series::zero(1));
    for (int i = 0; i <= m; ++i) {
        if (l.coeffs[i].is_exact_zero()) {
            continue;
        }
        const Series scaled = l.coeffs[i] * Series::variable(1, 1, m - i);
        for (int k = 0; k <= i; ++k) {
            if (s[i][k] != 0) {
                out.coeffs[k] += Rational(s[i][k]) * scaled;
            }
        }
    }
    return out;
}

/// Inverse of to_theta_form: t^{-m} sum_i (sum_k b_k S(k,i)) t^i d^i.
inline ScalarOperator to_d_form(const ScalarOperator &l)
{
    if (l.form == OperatorForm::d) {
        return l;
    }
    const int m = l.order();
    const auto s = detail::stirling_second(m);
    ScalarOperator out;
    out.form = OperatorForm::d;
    out.coeffs.assign(m + 1, Series::zero(1));
    for (int i = 0; i <= m; ++i) {
        Series acc = Series::zero(1);
        for (int k = i; k <= m; ++k) {
            if (s[k][i] != 0 && !l.coeffs[k].is_exact_zero()) {
                acc += Rational(s[k][i]) * l.coeffs[k];
            }
        }
        if (!acc.is_exact_zero()) {
            out.coeffs[i] = acc * Series::variable(1, 1, i - m);
        }
    }
    return out;
}

/// Monic normalisation of the formal adjoint sum_i (-d)^i a_i of a d-form operator.
inline ScalarOperator adjoint(const ScalarOperator &l)
{
    const ScalarOperator p = to_d_form(l);
    const int m = p.order();
    ScalarOperator out;
    out.form = OperatorForm::d;
    out.coeffs.assign(m + 1, Series::zero(1));
    for (int i = 0; i <= m; ++i) {
        if (p.coeffs[i].is_exact_zero()) {
            continue;
        }
        // (-1)^i d^i a = (-1)^i sum_j C(i,j) a^{(i-j)} d^j
        Integer binom = 1;
        for (int j = i; j >= 0; --j) {
            if (j < i) {
                binom = binom * (j + 1) / (i - j);
            }
            const Series term = detail::nth_derivative(p.coeffs[i], i - j);
            if (!term.is_exact_zero()) {
                const int sign = ((i + m) % 2 == 0) ? 1 : -1; // normalise by (-1)^m
                out.coeffs[j] += Rational(Integer(sign) * binom) * term;
            }
        }
    }
    return out;
}

/// One edge of the lower hull.
struct HullEdge {
    Rational slope;
    int length = 0;
};

struct NewtonPolygon {
    std::vector<std::pair<int, int>> points;   // (i, v(b_i))
    std::vector<std::pair<int, int>> vertices; // lower hull, increasing i
    std::vector<HullEdge> edges;
    int irregularity = 0;

    std::vector<Rational> slopes() const
    {
        std::vector<Rational> out;
        for (const auto &e : edges) {
            out.push_back(e.slope);
        }
        return out;
    }
};

inline NewtonPolygon newton_polygon(const ScalarOperator &op)
{
    op.validate();
    const ScalarOperator l = to_theta_form(op);
    NewtonPolygon np;
    for (int i = 0; i <= l.order(); ++i) {
        if (l.coeffs[i].is_exact_zero()) {
            continue;
        }
        np.points.emplace_back(i, l.coeffs[i].valuation());
    }
    // Monotone chain, lower part.
    for (const auto &p : np.points) {
        while (np.vertices.size() >= 2) {
            const auto &a = np.vertices[np.vertices.size() - 2];
            const auto &b = np.vertices.back();
            const long long cross = static_cast<long long>(b.first - a.first) * (p.second - a.second)
                                    - static_cast<long long>(b.second - a.second) * (p.first - a.first);
            if (cross > 0) {
                break;
            }
            np.vertices.pop_back();
        }
        np.vertices.push_back(p);
    }
    Rational rise = 0;
    for (std::size_t k = 1; k < np.vertices.size(); ++k) {
        const int dx = np.vertices[k].first - np.vertices[k - 1].first;
        const int dy = np.vertices[k].second - np.vertices[k - 1].second;
        np.edges.push_back({make_rational(dy, dx), dx});
        if (dy > 0) {
            rise += np.edges.back().slope * dx;
        }
    }
    if (rise.get_den() != 1) {
        throw DegreeMismatch("non-integral irregularity");
    }
    np.irregularity = static_cast<int>(rise.get_num().get_si());
    return np;
}

/// Vectors s, nabla s, ..., nabla^{r-1} s as rows.
inline SeriesMatrix cyclic_certificate(const Connection &c, const std::vector<Series> &s)
{
    const std::size_t r = static_cast<std::size_t>(c.rank);
    SeriesMatrix cert(r, r, Series::zero(c.level()));
    const DiffOperator nabla = c.covariant(c.level());
    std::vector<Series> v = s;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            cert(i, j) = v[j];
        }
        if (i + 1 < r) {
            v = nabla(v);
        }
    }
    return cert;
}

struct CyclicVector {
    std::vector<Series> vector;
    SeriesMatrix certificate;
    Series determinant;
};

inline std::optional<CyclicVector> test_cyclic(const Connection &c, const std::vector<Series> &s)
{
    SeriesMatrix cert = cyclic_certificate(c, s);
    const Series det = determinant(cert, Series::zero(c.level()));
    if (!field_ops<Series>::is_certified_nonzero(det)) {
        return std::nullopt;
    }
    return CyclicVector{s, std::move(cert), det};
}

inline bool is_cyclic(const Connection &c, const std::vector<Series> &s)
{
    return test_cyclic(c, s).has_value();
}

/// Shifted monomials sum_i t^{c_i} e_i over permutations of {0..r-1}, then
/// seeded random polynomial candidates.
inline CyclicVector find_cyclic_vector(const Connection &c, unsigned seed = 0, int random_attempts = 64)
{
    c.validate();
    if (c.level() != 1) {
        throw LevelMismatch("cyclic vectors are searched over k((t)) only");
    }
    if (c.rank < 1) {
        throw DimensionMismatch("cyclic vector needs rank >= 1");
    }
    std::vector<int> shifts(c.rank);
    std::iota(shifts.begin(), shifts.end(), 0);
    do {
        std::vector<Series> s;
        for (int e : shifts) {
            s.push_back(Series::variable(1, 1, e));
        }
        if (auto found = test_cyclic(c, s)) {
            return *found;
        }
    } while (std::next_permutation(shifts.begin(), shifts.end()));

    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int attempt = 0; attempt < random_attempts; ++attempt) {
        std::vector<Series> s;
        for (int i = 0; i < c.rank; ++i) {
            std::map<int, Series> terms;
            for (int k = 0; k <= c.rank; ++k) {
                const int q = coef(rng);
                if (q != 0) {
                    terms.emplace(k, Series::constant(0, Rational(q)));
                }
            }
            s.push_back(Series::from_coefficients(1, std::move(terms)));
        }
        if (auto found = test_cyclic(c, s)) {
            return *found;
        }
    }
    throw SearchExhausted("no cyclic vector certified; raise the precision and retry");
}

/// Monic relation d^r + sum a_i d^i satisfied by s under nabla.
inline ScalarOperator cyclic_relation(const Connection &c, const std::vector<Series> &s)
{
    const auto cv = test_cyclic(c, s);
    if (!cv) {
        throw DimensionMismatch("vector is not cyclic");
    }
    const std::size_t r = static_cast<std::size_t>(c.rank);
    std::vector<Series> top = s;
    const DiffOperator nabla = c.covariant(1);
    for (std::size_t i = 0; i < r; ++i) {
        top = nabla(top);
    }
    for (auto &x : top) {
        x = -x;
    }
    const auto a = solve(SeriesMatrix(cv->certificate.transposed()), top, Series::zero(1));
    if (!a) {
        throw DimensionMismatch("cyclic relation is inconsistent");
    }
    ScalarOperator l;
    l.form = OperatorForm::d;
    l.coeffs = *a;
    l.coeffs.push_back(Series::one(1));
    return l;
}

/// det(C) times the cyclic relation, C the certificate; by Cramer's rule the
/// coefficients stay Laurent polynomials for exact input.
inline ScalarOperator cleared_cyclic_relation(const Connection &c, const std::vector<Series> &s)
{
    const auto cv = test_cyclic(c, s);
    if (!cv) {
        throw DimensionMismatch("vector is not cyclic");
    }
    const std::size_t r = static_cast<std::size_t>(c.rank);
    std::vector<Series> top = s;
    const DiffOperator nabla = c.covariant(1);
    for (std::size_t i = 0; i < r; ++i) {
        top = nabla(top);
    }
    const SeriesMatrix m = cv->certificate.transposed();
    const Series zero = Series::zero(1);
    ScalarOperator l;
    l.form = OperatorForm::d;
    for (std::size_t i = 0; i < r; ++i) {
        SeriesMatrix mi = m;
        for (std::size_t k = 0; k < r; ++k) {
            mi(k, i) = -top[k];
        }
        l.coeffs.push_back(division_free_determinant(mi, zero));
    }
    l.coeffs.push_back(division_free_determinant(m, zero));
    return l;
}

/// Scalar operator whose solutions correspond to horizontal sections of nabla:
/// the adjoint of the cyclic relation.
inline ScalarOperator to_scalar_operator(const Connection &c, const std::vector<Series> &s)
{
    return adjoint(cyclic_relation(c, s));
}

inline NewtonPolygon connection_newton_polygon(const Connection &c, unsigned seed = 0)
{
    const auto cv = find_cyclic_vector(c, seed);
    return newton_polygon(to_scalar_operator(c, cv.vector));
}

inline int irregularity(const Connection &c, unsigned seed = 0)
{
    return connection_newton_polygon(c, seed).irregularity;
}

inline std::string to_string(const ScalarOperator &l)
{
    const std::string d = l.form == OperatorForm::d ? "d" : "theta";
    std::string out;
    for (int i = l.order(); i >= 0; --i) {
        const Series &a = l.coeffs[i];
        if (a.is_exact_zero()) {
            continue;
        }
        std::string op = i == 0 ? "" : (i == 1 ? d : d + "^" + std::to_string(i));
        std::string term;
        if (a == Series::one(1) && i > 0) {
            term = op;
        } else {
            term = "(" + to_string(a) + ")" + (op.empty() ? "" : "*" + op);
        }
        out += out.empty() ? term : " + " + term;
    }
    return out.empty() ? "0" : out;
}

} // namespace drep

#endif
