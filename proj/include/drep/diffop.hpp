#ifndef DREP_DIFFOP_HPP
#define DREP_DIFFOP_HPP

#include <algorithm>
#include <climits>
#include <vector>

#include <drep/errors.hpp>
#include <drep/matrix.hpp>
#include <drep/series.hpp>
#include <drep/window.hpp>

namespace drep
{

/// First-order operator y -> sum_j P_j d_j y + Q y on column vectors over F_n.
class DiffOperator
{
public:
    DiffOperator() = default;

    DiffOperator(int level, std::vector<SeriesMatrix> derivative_coeffs, SeriesMatrix multiplier)
        : m_level(level), m_d(std::move(derivative_coeffs)), m_q(std::move(multiplier))
    {
        if (static_cast<int>(m_d.size()) != level) {
            throw DimensionMismatch("need one derivative coefficient per variable");
        }
        for (const auto &p : m_d) {
            if (p.rows() != m_q.rows() || p.cols() != m_q.cols()) {
                throw DimensionMismatch("derivative coefficient shape differs from multiplier shape");
            }
        }
    }

    static DiffOperator multiplication(int level, const SeriesMatrix &m)
    {
        return {level, std::vector<SeriesMatrix>(level, zero_matrix(m.rows(), m.cols(), level)), m};
    }

    /// d_i + A on rank-r sections.
    static DiffOperator covariant(int level, int i, const SeriesMatrix &a)
    {
        std::vector<SeriesMatrix> d(level, zero_matrix(a.rows(), a.cols(), level));
        d[i - 1] = identity_matrix(a.rows(), level);
        return {level, std::move(d), a};
    }

    static DiffOperator zero(int level, std::size_t rows, std::size_t cols)
    {
        return multiplication(level, zero_matrix(rows, cols, level));
    }

    int level() const noexcept
    {
        return m_level;
    }
    std::size_t rows() const noexcept
    {
        return m_q.rows();
    }
    std::size_t cols() const noexcept
    {
        return m_q.cols();
    }
    const std::vector<SeriesMatrix> &derivative_coeffs() const noexcept
    {
        return m_d;
    }
    const SeriesMatrix &multiplier() const noexcept
    {
        return m_q;
    }

    std::vector<Series> operator()(const std::vector<Series> &y) const
    {
        std::vector<Series> out = drep::apply(m_q, y);
        for (int j = 1; j <= m_level; ++j) {
            const SeriesMatrix &p = m_d[j - 1];
            if (is_exact_zero(p)) {
                continue;
            }
            std::vector<Series> dy;
            dy.reserve(y.size());
            for (const auto &x : y) {
                dy.push_back(derive(x, j));
            }
            const auto term = drep::apply(p, dy);
            for (std::size_t i = 0; i < out.size(); ++i) {
                out[i] += term[i];
            }
        }
        return out;
    }

    friend DiffOperator operator+(const DiffOperator &a, const DiffOperator &b)
    {
        DiffOperator out = a;
        for (int j = 0; j < a.m_level; ++j) {
            out.m_d[j] = a.m_d[j] + b.m_d[j];
        }
        out.m_q = a.m_q + b.m_q;
        return out;
    }

    DiffOperator operator-() const
    {
        DiffOperator out = *this;
        for (auto &p : out.m_d) {
            p = -p;
        }
        out.m_q = -out.m_q;
        return out;
    }

    /// Left multiplication by a matrix of functions.
    friend DiffOperator operator*(const SeriesMatrix &m, const DiffOperator &op)
    {
        DiffOperator out = op;
        for (auto &p : out.m_d) {
            p = m * p;
        }
        out.m_q = m * op.m_q;
        return out;
    }

    /// Formal adjoint for the pairing (y, u) -> Res(y^T u): -sum P_j^T d_j + (Q^T - sum d_j P_j^T).
    DiffOperator adjoint() const
    {
        std::vector<SeriesMatrix> d;
        SeriesMatrix q = m_q.transposed();
        for (int j = 1; j <= m_level; ++j) {
            const SeriesMatrix pt = m_d[j - 1].transposed();
            d.push_back(-pt);
            q = q - derive(pt, j);
        }
        return {m_level, std::move(d), std::move(q)};
    }

    /// Lowest exponent shift of t_i produced by the operator (coefficient order
    /// minus one for derivative terms in the i-th variable).
    int min_shift(int i) const
    {
        int best = INT_MAX;
        auto visit = [&](const SeriesMatrix &m, int extra) {
            for (std::size_t r = 0; r < m.rows(); ++r) {
                for (std::size_t c = 0; c < m.cols(); ++c) {
                    if (m(r, c).is_exact_zero()) {
                        continue;
                    }
                    best = std::min(best, min_exponent(m(r, c), i) + extra);
                }
            }
        };
        visit(m_q, 0);
        for (int j = 1; j <= m_level; ++j) {
            visit(m_d[j - 1], j == i ? -1 : 0);
        }
        return best == INT_MAX ? 0 : best;
    }

    LinearOp as_linear_op(const std::vector<int> &shift) const
    {
        LinearOp op;
        op.level = m_level;
        op.in_rank = static_cast<int>(cols());
        op.out_rank = static_cast<int>(rows());
        op.shift = shift;
        DiffOperator self = *this;
        op.apply = [self](const std::vector<Series> &v) { return self(v); };
        return op;
    }

    /// Least exponent of t_i among stored terms of x.
    static int min_exponent(const Series &x, int i)
    {
        int best = INT_MAX;
        for_each_term(x, [&](const std::vector<int> &e, const Rational &) { best = std::min(best, e[i - 1]); });
        if (best == INT_MAX) {
            // Only O-terms: bound by the window.
            best = x.level() == i ? x.order_bound() : 0;
        }
        return best;
    }

private:
    int m_level = 0;
    std::vector<SeriesMatrix> m_d;
    SeriesMatrix m_q;
};

} // namespace drep

#endif
