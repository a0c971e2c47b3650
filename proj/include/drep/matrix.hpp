#ifndef DREP_MATRIX_HPP
#define DREP_MATRIX_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <drep/errors.hpp>
#include <drep/rational.hpp>
#include <drep/series.hpp>

namespace drep
{

// Field operations used by the elimination routines. The zero/one of a Series
// depends on its level, hence the "like" argument.
template <typename T>
struct field_ops;

template <>
struct field_ops<Rational> {
    static Rational zero(const Rational &)
    {
        return 0;
    }
    static Rational one(const Rational &)
    {
        return 1;
    }
    static bool is_exact_zero(const Rational &x)
    {
        return x == 0;
    }
    static bool is_certified_nonzero(const Rational &x)
    {
        return x != 0;
    }
    // Pivots over k are taken top-down; keeps banded window matrices banded.
    static int pivot_score(const Rational &)
    {
        return 0;
    }
    static Rational inverse(const Rational &x)
    {
        if (x == 0) {
            throw ZeroDivision("division by zero in k");
        }
        return Rational(1) / x;
    }
    static std::string text(const Rational &x)
    {
        return to_string(x);
    }
};

template <>
struct field_ops<Series> {
    static Series zero(const Series &like)
    {
        return Series::zero(like.level());
    }
    static Series one(const Series &like)
    {
        return Series::one(like.level());
    }
    static bool is_exact_zero(const Series &x)
    {
        return x.is_exact_zero();
    }
    static bool is_certified_nonzero(const Series &x)
    {
        return !x.is_zero();
    }
    // Minimal outer valuation first: division by high-valuation entries costs window width.
    static int pivot_score(const Series &x)
    {
        return x.level() == 0 ? 0 : x.valuation();
    }
    static Series inverse(const Series &x)
    {
        return invert(x);
    }
    static std::string text(const Series &x)
    {
        return to_string(x);
    }
};

/// Dense row-major matrix.
template <typename T>
class Matrix
{
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T &fill) : m_rows(rows), m_cols(cols), m_data(rows * cols, fill) {}

    static Matrix identity(std::size_t n, const T &like)
    {
        Matrix m(n, n, field_ops<T>::zero(like));
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = field_ops<T>::one(like);
        }
        return m;
    }

    std::size_t rows() const noexcept
    {
        return m_rows;
    }
    std::size_t cols() const noexcept
    {
        return m_cols;
    }

    T &operator()(std::size_t r, std::size_t c)
    {
        return m_data[r * m_cols + c];
    }
    const T &operator()(std::size_t r, std::size_t c) const
    {
        return m_data[r * m_cols + c];
    }

    Matrix transposed() const
    {
        Matrix out;
        out.m_rows = m_cols;
        out.m_cols = m_rows;
        out.m_data.reserve(m_data.size());
        for (std::size_t c = 0; c < m_cols; ++c) {
            for (std::size_t r = 0; r < m_rows; ++r) {
                out.m_data.push_back((*this)(r, c));
            }
        }
        return out;
    }

    friend Matrix operator*(const Matrix &a, const Matrix &b)
    {
        if (a.m_cols != b.m_rows) {
            throw DimensionMismatch("matrix product of " + shape(a) + " and " + shape(b));
        }
        const T &like = a.m_data.empty() ? (b.m_data.empty() ? T{} : b.m_data.front()) : a.m_data.front();
        Matrix out(a.m_rows, b.m_cols, field_ops<T>::zero(like));
        for (std::size_t i = 0; i < a.m_rows; ++i) {
            for (std::size_t k = 0; k < a.m_cols; ++k) {
                const T &aik = a(i, k);
                if (field_ops<T>::is_exact_zero(aik)) {
                    continue;
                }
                for (std::size_t j = 0; j < b.m_cols; ++j) {
                    if (!field_ops<T>::is_exact_zero(b(k, j))) {
                        out(i, j) = out(i, j) + aik * b(k, j);
                    }
                }
            }
        }
        return out;
    }

    friend Matrix operator+(const Matrix &a, const Matrix &b)
    {
        check_same_shape(a, b);
        Matrix out = a;
        for (std::size_t i = 0; i < a.m_data.size(); ++i) {
            out.m_data[i] = a.m_data[i] + b.m_data[i];
        }
        return out;
    }

    friend Matrix operator-(const Matrix &a, const Matrix &b)
    {
        check_same_shape(a, b);
        Matrix out = a;
        for (std::size_t i = 0; i < a.m_data.size(); ++i) {
            out.m_data[i] = a.m_data[i] - b.m_data[i];
        }
        return out;
    }

    Matrix operator-() const
    {
        Matrix out = *this;
        for (auto &x : out.m_data) {
            x = -x;
        }
        return out;
    }

    template <typename F>
    Matrix map(F &&f) const
    {
        Matrix out = *this;
        for (auto &x : out.m_data) {
            x = f(x);
        }
        return out;
    }

    friend bool operator==(const Matrix &, const Matrix &) = default;

    static std::string shape(const Matrix &m)
    {
        return std::to_string(m.m_rows) + "x" + std::to_string(m.m_cols);
    }

private:
    static void check_same_shape(const Matrix &a, const Matrix &b)
    {
        if (a.m_rows != b.m_rows || a.m_cols != b.m_cols) {
            throw DimensionMismatch("shape " + shape(a) + " vs " + shape(b));
        }
    }

    std::size_t m_rows = 0;
    std::size_t m_cols = 0;
    std::vector<T> m_data;
};

using SeriesMatrix = Matrix<Series>;
using RationalMatrix = Matrix<Rational>;

template <typename T>
using Vector = std::vector<T>;

/// Matrix-vector product.
template <typename T>
Vector<T> apply(const Matrix<T> &m, const Vector<T> &v)
{
    if (m.cols() != v.size()) {
        throw DimensionMismatch("matrix-vector product with " + Matrix<T>::shape(m) + " and length "
                                + std::to_string(v.size()));
    }
    Vector<T> out;
    out.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        T acc = v.empty() ? T{} : field_ops<T>::zero(v.front());
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!field_ops<T>::is_exact_zero(m(i, j)) && !field_ops<T>::is_exact_zero(v[j])) {
                acc = acc + m(i, j) * v[j];
            }
        }
        out.push_back(std::move(acc));
    }
    return out;
}

/// Reduced echelon data of a matrix over a field.
template <typename T>
struct Elimination {
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_columns;
    Matrix<T> reduced;                  // reduced row echelon form
    std::vector<Vector<T>> kernel;      // basis of the right kernel
    std::optional<T> determinant;       // square inputs only
};

/// Pivot columns of an exactly represented matrix, found by division-free
/// elimination so that exact cancellation is detected exactly.
template <typename T>
std::vector<bool> exact_pivot_columns(Matrix<T> m)
{
    using ops = field_ops<T>;
    std::vector<bool> pivot(m.cols(), false);
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && ops::is_exact_zero(m(p, c))) {
            ++p;
        }
        if (p == m.rows()) {
            continue;
        }
        for (std::size_t j = 0; j < m.cols(); ++j) {
            std::swap(m(r, j), m(p, j));
        }
        const T a = m(r, c);
        for (std::size_t i = r + 1; i < m.rows(); ++i) {
            if (ops::is_exact_zero(m(i, c))) {
                continue;
            }
            const T b = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) {
                m(i, j) = a * m(i, j) - b * m(r, j);
            }
        }
        pivot[c] = true;
        ++r;
    }
    return pivot;
}

/// Division-free determinant (Bird's recursion).
template <typename T>
T division_free_determinant(const Matrix<T> &a, const T &like)
{
    using ops = field_ops<T>;
    const std::size_t n = a.rows();
    if (n == 0) {
        return ops::one(like);
    }
    Matrix<T> x = a;
    for (std::size_t step = 1; step < n; ++step) {
        Matrix<T> mu(n, n, ops::zero(like));
        T acc = ops::zero(like);
        for (std::size_t i = n; i-- > 0;) {
            mu(i, i) = -acc;
            acc = acc + x(i, i);
            for (std::size_t j = i + 1; j < n; ++j) {
                mu(i, j) = x(i, j);
            }
        }
        x = mu * a;
    }
    return (n % 2 == 1) ? x(0, 0) : -x(0, 0);
}

template <typename T>
bool all_exact(const Matrix<T> &m)
{
    if constexpr (std::is_same_v<T, Series>) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t j = 0; j < m.cols(); ++j) {
                if (!m(i, j).exact()) {
                    return false;
                }
            }
        }
    }
    return true;
}

/// Gauss-Jordan elimination. Over F_n, pivots of minimal valuation are chosen;
/// a column whose candidates are all zero only up to precision raises
/// UndeterminedPivot.
template <typename T>
Elimination<T> eliminate(Matrix<T> m, const T &like)
{
    using ops = field_ops<T>;
    const std::size_t rows = m.rows(), cols = m.cols();
    Elimination<T> out;
    T det = ops::one(like);
    bool det_sign_negative = false;
    std::optional<std::vector<bool>> forced;
    if constexpr (std::is_same_v<T, Series>) {
        // Division-free elimination grows degrees quickly; small matrices only.
        if (std::min(rows, cols) <= 8 && all_exact(m)) {
            forced = exact_pivot_columns(m);
        }
    }
    const Matrix<T> original = m;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        if (forced && !(*forced)[c]) {
            for (std::size_t i = r; i < rows; ++i) {
                m(i, c) = ops::zero(like);
            }
            continue;
        }
        std::optional<std::size_t> best;
        int best_score = 0;
        bool undetermined = false;
        for (std::size_t i = r; i < rows; ++i) {
            const T &x = m(i, c);
            if (ops::is_certified_nonzero(x)) {
                const int score = ops::pivot_score(x);
                if (!best || score < best_score) {
                    best = i;
                    best_score = score;
                    if constexpr (std::is_same_v<T, Rational>) {
                        break;
                    }
                }
            } else if (!ops::is_exact_zero(x)) {
                undetermined = true;
            }
        }
        if (!best) {
            if (undetermined) {
                throw UndeterminedPivot("column " + std::to_string(c) + " has only entries that vanish up to precision");
            }
            continue;
        }
        if (*best != r) {
            for (std::size_t j = 0; j < cols; ++j) {
                std::swap(m(r, j), m(*best, j));
            }
            det_sign_negative = !det_sign_negative;
        }
        det = det * m(r, c);
        const T inv = ops::inverse(m(r, c));
        std::vector<std::size_t> support;
        for (std::size_t j = c; j < cols; ++j) {
            if (!ops::is_exact_zero(m(r, j))) {
                m(r, j) = m(r, j) * inv;
                support.push_back(j);
            }
        }
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || ops::is_exact_zero(m(i, c))) {
                continue;
            }
            const T factor = m(i, c);
            for (std::size_t j : support) {
                m(i, j) = m(i, j) - factor * m(r, j);
            }
        }
        out.pivot_columns.push_back(c);
        ++r;
    }
    out.rank = r;
    std::vector<bool> is_pivot(cols, false);
    for (auto c : out.pivot_columns) {
        is_pivot[c] = true;
    }
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) {
            continue;
        }
        Vector<T> v(cols, ops::zero(like));
        v[f] = ops::one(like);
        for (std::size_t i = 0; i < out.pivot_columns.size(); ++i) {
            v[out.pivot_columns[i]] = -m(i, f);
        }
        out.kernel.push_back(std::move(v));
    }
    if (rows == cols) {
        if (out.rank < rows) {
            out.determinant = ops::zero(like);
        } else if (forced) {
            out.determinant = division_free_determinant(original, like);
        } else {
            out.determinant = det_sign_negative ? -det : det;
        }
    }
    out.reduced = std::move(m);
    return out;
}

/// (rank, kernel basis, determinant) of a square or rectangular SeriesMatrix.
struct RankKernelDet {
    std::size_t rank = 0;
    std::vector<Vector<Series>> kernel;
    std::optional<Series> determinant;
};

inline RankKernelDet rank_kernel_det(const SeriesMatrix &m)
{
    if (m.rows() == 0 || m.cols() == 0) {
        RankKernelDet out;
        if (m.rows() == m.cols()) {
            out.determinant = Series::one(0);
        }
        return out;
    }
    const Series like = Series::zero(m(0, 0).level());
    auto e = eliminate(m, like);
    return {e.rank, std::move(e.kernel), std::move(e.determinant)};
}

template <typename T>
T determinant(const Matrix<T> &m, const T &like)
{
    if (m.rows() != m.cols()) {
        throw DimensionMismatch("determinant of non-square matrix " + Matrix<T>::shape(m));
    }
    if (m.rows() == 0) {
        return field_ops<T>::one(like);
    }
    return *eliminate(m, like).determinant;
}

template <typename T>
std::size_t rank(const Matrix<T> &m, const T &like)
{
    if (m.rows() == 0 || m.cols() == 0) {
        return 0;
    }
    return eliminate(m, like).rank;
}

/// Solves m x = b; nullopt when inconsistent.
template <typename T>
std::optional<Vector<T>> solve(const Matrix<T> &m, const Vector<T> &b, const T &like)
{
    if (b.size() != m.rows()) {
        throw DimensionMismatch("right-hand side length mismatch");
    }
    Matrix<T> aug(m.rows(), m.cols() + 1, field_ops<T>::zero(like));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            aug(i, j) = m(i, j);
        }
        aug(i, m.cols()) = b[i];
    }
    auto e = eliminate(aug, like);
    Vector<T> x(m.cols(), field_ops<T>::zero(like));
    for (std::size_t i = 0; i < e.pivot_columns.size(); ++i) {
        const std::size_t c = e.pivot_columns[i];
        if (c == m.cols()) {
            return std::nullopt;
        }
        x[c] = e.reduced(i, m.cols());
    }
    return x;
}

/// Transposed cofactor matrix, division-free.
template <typename T>
Matrix<T> adjugate(const Matrix<T> &m, const T &like)
{
    const std::size_t n = m.rows();
    Matrix<T> out(n, n, field_ops<T>::zero(like));
    if (n == 1) {
        out(0, 0) = field_ops<T>::one(like);
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Matrix<T> minor(n - 1, n - 1, field_ops<T>::zero(like));
            for (std::size_t r = 0, rr = 0; r < n; ++r) {
                if (r == j) {
                    continue;
                }
                for (std::size_t c = 0, cc = 0; c < n; ++c) {
                    if (c != i) {
                        minor(rr, cc++) = m(r, c);
                    }
                }
                ++rr;
            }
            const T d = division_free_determinant(minor, like);
            out(i, j) = (i + j) % 2 == 0 ? d : -d;
        }
    }
    return out;
}

template <typename T>
Matrix<T> inverse(const Matrix<T> &m, const T &like)
{
    const std::size_t n = m.rows();
    if (n != m.cols()) {
        throw DimensionMismatch("inverse of non-square matrix");
    }
    if constexpr (std::is_same_v<T, Series>) {
        // Exact inverse when the determinant is a unit monomial, e.g. integral gauges.
        if (n >= 1 && n <= 6 && all_exact(m)) {
            const T det = division_free_determinant(m, like);
            if (det.is_exact_zero()) {
                throw ZeroDivision("matrix is singular");
            }
            const T det_inv = invert(det);
            if (det_inv.exact()) {
                Matrix<T> out = adjugate(m, like);
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        out(i, j) = out(i, j) * det_inv;
                    }
                }
                return out;
            }
        }
    }
    Matrix<T> aug(n, 2 * n, field_ops<T>::zero(like));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            aug(i, j) = m(i, j);
        }
        aug(i, n + i) = field_ops<T>::one(like);
    }
    auto e = eliminate(aug, like);
    if (e.rank < n || e.pivot_columns.back() >= n) {
        throw ZeroDivision("matrix is singular");
    }
    Matrix<T> out(n, n, field_ops<T>::zero(like));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out(i, j) = e.reduced(i, n + j);
        }
    }
    return out;
}

/// Entrywise operations on series matrices.
inline SeriesMatrix derive(const SeriesMatrix &m, int i)
{
    return m.map([i](const Series &x) { return derive(x, i); });
}

inline SeriesMatrix zero_matrix(std::size_t rows, std::size_t cols, int level)
{
    return SeriesMatrix(rows, cols, Series::zero(level));
}

inline SeriesMatrix identity_matrix(std::size_t n, int level)
{
    return SeriesMatrix::identity(n, Series::zero(level));
}

inline SeriesMatrix scalar_times(const Series &s, const SeriesMatrix &m)
{
    return m.map([&s](const Series &x) { return x.is_exact_zero() ? x : s * x; });
}

inline bool is_exact_zero(const SeriesMatrix &m)
{
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!m(i, j).is_exact_zero()) {
                return false;
            }
        }
    }
    return true;
}

inline bool is_zero_up_to_precision(const SeriesMatrix &m)
{
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!m(i, j).is_zero()) {
                return false;
            }
        }
    }
    return true;
}

} // namespace drep

#endif
