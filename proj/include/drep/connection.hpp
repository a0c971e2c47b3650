#ifndef DREP_CONNECTION_HPP
#define DREP_CONNECTION_HPP

#include <optional>
#include <string>
#include <vector>

#include <drep/diffop.hpp>
#include <drep/errors.hpp>
#include <drep/matrix.hpp>
#include <drep/series.hpp>

namespace drep
{

/// nabla = d + sum_i A_i dt_i acting on column vectors of F_n^rank.
struct Connection {
    TowerField field;
    int rank = 0;
    std::vector<SeriesMatrix> a; // A_1..A_n

    int level() const
    {
        return field.level;
    }

    void validate() const
    {
        field.validate();
        if (rank < 0) {
            throw DimensionMismatch("rank must be non-negative");
        }
        if (static_cast<int>(a.size()) != field.level) {
            throw DimensionMismatch("expected " + std::to_string(field.level) + " connection matrices, got "
                                    + std::to_string(a.size()));
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (static_cast<int>(a[i].rows()) != rank || static_cast<int>(a[i].cols()) != rank) {
                throw DimensionMismatch("A" + std::to_string(i + 1) + " is " + SeriesMatrix::shape(a[i])
                                        + ", expected " + std::to_string(rank) + "x" + std::to_string(rank));
            }
            for (std::size_t r = 0; r < a[i].rows(); ++r) {
                for (std::size_t c = 0; c < a[i].cols(); ++c) {
                    if (a[i](r, c).level() != field.level) {
                        throw LevelMismatch("connection entry at the wrong tower level");
                    }
                }
            }
        }
    }

    static Connection trivial(const TowerField &field, int rank)
    {
        Connection c;
        c.field = field;
        c.rank = rank;
        c.a.assign(field.level, zero_matrix(rank, rank, field.level));
        return c;
    }

    /// d_i + A_i.
    DiffOperator covariant(int i) const
    {
        if (i < 1 || i > level()) {
            throw IndexOutOfRange("direction " + std::to_string(i) + " outside 1.." + std::to_string(level()));
        }
        return DiffOperator::covariant(level(), i, a[i - 1]);
    }

    /// nabla along the vector field sum_j v_j d_j.
    DiffOperator along(const std::vector<Series> &v) const
    {
        if (static_cast<int>(v.size()) != level()) {
            throw DimensionMismatch("vector field has wrong number of components");
        }
        DiffOperator out = DiffOperator::zero(level(), rank, rank);
        for (int j = 1; j <= level(); ++j) {
            if (v[j - 1].is_exact_zero()) {
                continue;
            }
            SeriesMatrix scale = identity_matrix(rank, level());
            scale = scalar_times(v[j - 1], scale);
            out = out + scale * covariant(j);
        }
        return out;
    }

    friend bool operator==(const Connection &, const Connection &) = default;
};

/// Either flat, or the first curvature entry certified nonzero.
struct FlatnessReport {
    bool flat = true;
    int i = 0, j = 0;
    int row = 0, col = 0;
    std::optional<Series> entry;
};

/// Curvature component d_i A_j - d_j A_i + [A_i, A_j].
inline SeriesMatrix curvature(const Connection &c, int i, int j)
{
    const SeriesMatrix &ai = c.a[i - 1];
    const SeriesMatrix &aj = c.a[j - 1];
    return derive(aj, i) - derive(ai, j) + ai * aj - aj * ai;
}

inline FlatnessReport check_flatness(const Connection &c)
{
    c.validate();
    FlatnessReport report;
    const int n = c.level();
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            const SeriesMatrix f = curvature(c, i, j);
            for (std::size_t r = 0; r < f.rows(); ++r) {
                for (std::size_t s = 0; s < f.cols(); ++s) {
                    const Series &x = f(r, s);
                    if (!x.is_zero()) {
                        report.flat = false;
                        report.i = i;
                        report.j = j;
                        report.row = static_cast<int>(r);
                        report.col = static_cast<int>(s);
                        report.entry = x;
                        return report;
                    }
                }
            }
        }
    }
    return report;
}

inline void require_flat(const Connection &c)
{
    const auto r = check_flatness(c);
    if (!r.flat) {
        throw NotFlat("curvature component (" + std::to_string(r.i) + "," + std::to_string(r.j) + ") entry ("
                      + std::to_string(r.row + 1) + "," + std::to_string(r.col + 1) + ") = " + to_string(*r.entry));
    }
}

/// nabla^dual: matrices -A_i^T.
inline Connection dual(const Connection &c)
{
    Connection out = c;
    for (auto &m : out.a) {
        m = -m.transposed();
    }
    return out;
}

inline void require_same_field(const Connection &x, const Connection &y)
{
    if (!(x.field == y.field)) {
        throw FieldMismatch("connections live on different fields");
    }
}

inline Connection direct_sum(const Connection &x, const Connection &y)
{
    require_same_field(x, y);
    Connection out = Connection::trivial(x.field, x.rank + y.rank);
    for (int i = 0; i < x.level(); ++i) {
        for (int r = 0; r < x.rank; ++r) {
            for (int s = 0; s < x.rank; ++s) {
                out.a[i](r, s) = x.a[i](r, s);
            }
        }
        for (int r = 0; r < y.rank; ++r) {
            for (int s = 0; s < y.rank; ++s) {
                out.a[i](x.rank + r, x.rank + s) = y.a[i](r, s);
            }
        }
    }
    return out;
}

/// Kronecker sum A (x) 1 + 1 (x) B on the basis e_r (x) f_s, index r * rank(y) + s.
inline Connection tensor(const Connection &x, const Connection &y)
{
    require_same_field(x, y);
    const int n = x.level();
    Connection out = Connection::trivial(x.field, x.rank * y.rank);
    for (int i = 0; i < n; ++i) {
        for (int r = 0; r < x.rank; ++r) {
            for (int s = 0; s < y.rank; ++s) {
                for (int r2 = 0; r2 < x.rank; ++r2) {
                    for (int s2 = 0; s2 < y.rank; ++s2) {
                        Series v = Series::zero(n);
                        if (s == s2) {
                            v += x.a[i](r, r2);
                        }
                        if (r == r2) {
                            v += y.a[i](s, s2);
                        }
                        out.a[i](r * y.rank + s, r2 * y.rank + s2) = v;
                    }
                }
            }
        }
    }
    return out;
}

/// Extension [[A, B], [0, A']] of y by x (x is the sub-object).
inline Connection extension(const Connection &x, const Connection &y, const std::vector<SeriesMatrix> &b)
{
    Connection out = direct_sum(x, y);
    for (int i = 0; i < x.level(); ++i) {
        for (int r = 0; r < x.rank; ++r) {
            for (int s = 0; s < y.rank; ++s) {
                out.a[i](r, x.rank + s) = b[i](r, s);
            }
        }
    }
    return out;
}

/// Change of frame E -> g E: A_i -> g^{-1} A_i g + g^{-1} d_i g.
inline Connection gauge(const Connection &c, const SeriesMatrix &g)
{
    const Series like = Series::zero(c.level());
    const SeriesMatrix gi = inverse(g, like);
    Connection out = c;
    for (int i = 1; i <= c.level(); ++i) {
        out.a[i - 1] = gi * c.a[i - 1] * g + gi * derive(g, i);
    }
    return out;
}

/// d + omega on rank one.
inline Connection rank1_from_form(const TowerField &field, const OneForm &w)
{
    w.validate();
    if (w.level() != field.level || static_cast<int>(w.components.size()) != field.level) {
        throw LevelMismatch("form does not live on the given field");
    }
    for (const auto &c : exterior_derivative(w)) {
        if (!c.is_zero()) {
            throw NotFlat("d(omega) = " + to_string(c, field.names) + " != 0");
        }
    }
    Connection out = Connection::trivial(field, 1);
    for (int i = 0; i < field.level; ++i) {
        out.a[i](0, 0) = w.components[i];
    }
    return out;
}

/// The cover s^e = t_n of the outermost variable.
struct KummerCover {
    int ramification = 1;

    void validate() const
    {
        if (ramification < 1) {
            throw DimensionMismatch("ramification must be positive");
        }
    }
};

namespace detail
{

inline int floor_div(int a, int b)
{
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

} // namespace detail

/// Substitution t_n = s^e on an element of the base (pullback to the cover).
inline Series pullback(const Series &x, const KummerCover &k)
{
    const int e = k.ramification;
    if (x.level() == 0 || e == 1) {
        return x;
    }
    std::map<int, Series> c;
    for (const auto &[m, coeff] : x.coefficients()) {
        c.emplace(e * m, coeff);
    }
    return Series::from_coefficients(x.level(), std::move(c), x.outer_exact() ? kNoTruncation : e * x.hi());
}

/// nu on F_n pulled back along s^e = t_n: dt_n = e s^{e-1} ds.
inline OneForm pullback(const OneForm &w, const KummerCover &k)
{
    OneForm out;
    const int n = w.level();
    for (int i = 1; i <= n; ++i) {
        Series c = pullback(w.components[i - 1], k);
        if (i == n && k.ramification > 1) {
            c = c * Series::monomial(n, [&] {
                    std::vector<int> e(n, 0);
                    e[n - 1] = k.ramification - 1;
                    return e;
                }(), Rational(k.ramification));
        }
        out.components.push_back(std::move(c));
    }
    return out;
}

/// Push-forward along the cover: rank e*r over F_n on the basis s^k e_j (index k * r + j).
inline Connection induct(const Connection &c, const KummerCover &cover)
{
    cover.validate();
    c.validate();
    const int e = cover.ramification;
    const int n = c.level();
    const int r = c.rank;
    if (e == 1) {
        return c;
    }
    if (n < 1) {
        throw LevelMismatch("induction needs level >= 1");
    }
    Connection out = Connection::trivial(c.field, e * r);
    for (int dir = 1; dir <= n; ++dir) {
        const bool outer = dir == n;
        SeriesMatrix &target = out.a[dir - 1];
        // entries accumulated as maps t_n-exponent -> inner coefficient, with precision
        std::vector<std::map<int, Series>> acc(static_cast<std::size_t>(e * r * e * r));
        std::vector<int> hi(static_cast<std::size_t>(e * r * e * r), kNoTruncation);
        auto add = [&](int row, int col, int q, const Series &v) {
            auto &m = acc[static_cast<std::size_t>(row * e * r + col)];
            auto it = m.find(q);
            if (it == m.end()) {
                m.emplace(q, v);
            } else {
                it->second = it->second + v;
            }
        };
        for (int kk = 0; kk < e; ++kk) {
            for (int j = 0; j < r; ++j) {
                const int col = kk * r + j;
                if (outer && kk != 0) {
                    // d/dt (s^k) = (k/e) s^k / t
                    add(col, col, -1, Series::constant(n - 1, Rational(kk, e)));
                }
                for (int i = 0; i < r; ++i) {
                    const Series &entry = c.a[dir - 1](i, j);
                    const int offset = outer ? kk - e + 1 : kk;
                    for (const auto &[m, coeff] : entry.coefficients()) {
                        const int ex = offset + m;
                        const int q = detail::floor_div(ex, e);
                        const int rho = ex - q * e;
                        add(rho * r + i, col, q, outer ? Rational(1, e) * coeff : coeff);
                    }
                    if (!entry.outer_exact()) {
                        const int bound = offset + entry.hi(); // exponents < bound are known
                        for (int rho = 0; rho < e; ++rho) {
                            const int qhi = detail::floor_div(bound - rho + e - 1, e);
                            auto &h = hi[static_cast<std::size_t>((rho * r + i) * e * r + col)];
                            h = std::min(h, qhi);
                        }
                    }
                }
            }
        }
        for (int row = 0; row < e * r; ++row) {
            for (int col = 0; col < e * r; ++col) {
                const std::size_t idx = static_cast<std::size_t>(row * e * r + col);
                target(row, col) = Series::from_coefficients(n, std::move(acc[idx]), hi[idx]);
            }
        }
    }
    return out;
}

} // namespace drep

#endif
