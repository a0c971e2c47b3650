#ifndef DREP_WINDOW_HPP
#define DREP_WINDOW_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <drep/errors.hpp>
#include <drep/matrix.hpp>
#include <drep/series.hpp>

namespace drep
{

/// Basis vector t_1^{a_1}...t_n^{a_n} e_component of a window.
struct MonomialLabel {
    int component = 0;
    std::vector<int> exponents; // a_1..a_n

    // Lexicographic by (a_n, ..., a_1), then component.
    friend bool operator<(const MonomialLabel &x, const MonomialLabel &y)
    {
        if (x.exponents.size() != y.exponents.size()) {
            return x.exponents.size() < y.exponents.size();
        }
        for (std::size_t i = x.exponents.size(); i-- > 0;) {
            if (x.exponents[i] != y.exponents[i]) {
                return x.exponents[i] < y.exponents[i];
            }
        }
        return x.component < y.component;
    }
    friend bool operator==(const MonomialLabel &, const MonomialLabel &) = default;
};

/// Product window of exponents: lo[i] <= a_{i+1} < hi[i], for `rank` components.
struct ExponentBox {
    std::vector<int> lo;
    std::vector<int> hi;
    int rank = 1;

    static ExponentBox interval(int lo, int hi, int rank = 1)
    {
        return {{lo}, {hi}, rank};
    }

    int level() const
    {
        return static_cast<int>(lo.size());
    }

    ExponentBox shifted(const std::vector<int> &by, int new_rank) const
    {
        ExponentBox b = *this;
        for (std::size_t i = 0; i < lo.size(); ++i) {
            b.lo[i] += by[i];
            b.hi[i] += by[i];
        }
        b.rank = new_rank;
        return b;
    }

    std::vector<MonomialLabel> labels() const
    {
        std::vector<MonomialLabel> out;
        std::vector<int> cur(lo);
        const int n = level();
        for (int i = 0; i < n; ++i) {
            if (lo[i] >= hi[i]) {
                return out;
            }
        }
        for (;;) {
            for (int c = 0; c < rank; ++c) {
                out.push_back({c, cur});
            }
            int i = 0;
            while (i < n) {
                if (++cur[i] < hi[i]) {
                    break;
                }
                cur[i] = lo[i];
                ++i;
            }
            if (i == n) {
                break;
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

/// A k-linear operator F_n^{in_rank} -> F_n^{out_rank} whose image of a
/// window is read off in the window translated by `shift`.
struct LinearOp {
    int level = 1;
    int in_rank = 1;
    int out_rank = 1;
    std::vector<int> shift;
    std::function<std::vector<Series>(const std::vector<Series> &)> apply;

    /// this after other.
    LinearOp after(const LinearOp &other) const
    {
        if (other.out_rank != in_rank || other.level != level) {
            throw DimensionMismatch("operator composition shape mismatch");
        }
        LinearOp out;
        out.level = level;
        out.in_rank = other.in_rank;
        out.out_rank = out_rank;
        out.shift = shift;
        for (std::size_t i = 0; i < shift.size(); ++i) {
            out.shift[i] += other.shift[i];
        }
        auto f = apply;
        auto g = other.apply;
        out.apply = [f, g](const std::vector<Series> &v) { return f(g(v)); };
        return out;
    }
};

/// Finite rational matrix of an operator restricted to monomial windows.
struct WindowMatrix {
    RationalMatrix matrix;
    std::vector<MonomialLabel> row_labels;
    std::vector<MonomialLabel> col_labels;
};

enum class Overflow { reject, truncate };

namespace detail
{

inline Series basis_section_entry(const MonomialLabel &l, int level)
{
    return Series::monomial(level, l.exponents);
}

// Coefficient of the monomial with the given exponents; InsufficientPrecision
// when it lies outside a guaranteed window.
inline Rational coefficient_at(const Series &s, const std::vector<int> &exps)
{
    if (s.level() == 0) {
        return s.scalar();
    }
    return coefficient_at(s.coefficient(exps[s.level() - 1]), exps);
}

inline void for_each_term(const Series &s, std::vector<int> &stack, const std::function<void(const std::vector<int> &, const Rational &)> &f)
{
    if (s.level() == 0) {
        if (s.scalar() != 0) {
            std::vector<int> exps(stack.rbegin(), stack.rend());
            f(exps, s.scalar());
        }
        return;
    }
    for (const auto &[k, c] : s.coefficients()) {
        stack.push_back(k);
        for_each_term(c, stack, f);
        stack.pop_back();
    }
}

} // namespace detail

/// Calls f(exponents a_1..a_n, coefficient) for every nonzero stored term.
inline void for_each_term(const Series &s, const std::function<void(const std::vector<int> &, const Rational &)> &f)
{
    std::vector<int> stack;
    detail::for_each_term(s, stack, f);
}

/// True when the coefficient of the given monomial lies inside the guaranteed windows.
inline bool known_at(const Series &s, const std::vector<int> &exps)
{
    try {
        (void)detail::coefficient_at(s, exps);
        return true;
    } catch (const InsufficientPrecision &) {
        return false;
    }
}

inline WindowMatrix window_matrix(const LinearOp &op, const ExponentBox &window, Overflow policy = Overflow::reject)
{
    if (window.level() != op.level || window.rank != op.in_rank) {
        throw DimensionMismatch("window does not match operator shape");
    }
    const ExponentBox target = window.shifted(op.shift, op.out_rank);
    WindowMatrix out;
    out.col_labels = window.labels();
    out.row_labels = target.labels();
    std::map<MonomialLabel, std::size_t> row_index;
    for (std::size_t i = 0; i < out.row_labels.size(); ++i) {
        row_index.emplace(out.row_labels[i], i);
    }
    out.matrix = RationalMatrix(out.row_labels.size(), out.col_labels.size(), Rational(0));
    for (std::size_t j = 0; j < out.col_labels.size(); ++j) {
        const auto &col = out.col_labels[j];
        std::vector<Series> v(op.in_rank, Series::zero(op.level));
        v[col.component] = detail::basis_section_entry(col, op.level);
        const auto image = op.apply(v);
        for (int c = 0; c < op.out_rank; ++c) {
            const Series &s = image[c];
            for_each_term(s, [&](const std::vector<int> &exps, const Rational &q) {
                auto it = row_index.find({c, exps});
                if (it != row_index.end()) {
                    out.matrix(it->second, j) = q;
                } else if (policy == Overflow::reject) {
                    throw WindowOverflow("image of basis vector lands outside the target window");
                }
            });
            // Every target coefficient must be known.
            if (s.exact()) {
                continue;
            }
            for (const auto &row : out.row_labels) {
                if (row.component == c && !known_at(s, row.exponents)) {
                    throw WindowOverflow("operator image exceeds representable precision");
                }
            }
        }
    }
    return out;
}

} // namespace drep

#endif
