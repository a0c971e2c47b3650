#ifndef DREP_TATE_HPP
#define DREP_TATE_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <drep/diffop.hpp>
#include <drep/errors.hpp>
#include <drep/matrix.hpp>
#include <drep/series.hpp>
#include <drep/window.hpp>

namespace drep
{

/// t_1^{a_1}...t_n^{a_n} times the standard integral lattice, rank r.
struct Lattice {
    int level = 1;
    std::vector<int> shifts;
    int rank = 1;

    bool contains(const std::vector<Series> &v) const
    {
        for (const auto &x : v) {
            bool ok = true;
            for_each_term(x, [&](const std::vector<int> &e, const Rational &) {
                for (int i = 0; i < level; ++i) {
                    ok = ok && e[i] >= shifts[i];
                }
            });
            if (!ok) {
                return false;
            }
        }
        return true;
    }
};

/// Window sizes and the lattice normalisation used by operator_index.
struct IndexOptions {
    std::vector<int> schedule{8, 12, 16, 24, 32};
    int max_window = 32;
    // Shift of the reference operator nu^{-1} d (so that it has index 0).
    // Unset: taken from the derivative coefficient, or the operator's own
    // minimal shift for multiplication operators.
    std::optional<int> reference_shift;
    std::optional<int> predicted_index;
    bool want_basis = true;
};

struct WindowDims {
    int window = 0;
    int ker = 0;
    int coker = 0;
};

struct IndexReport {
    int ker_dim = 0;
    int coker_dim = 0;
    int index = 0;
    std::optional<int> stabilized_at;
    std::vector<WindowDims> history;
    std::vector<std::vector<Series>> ker_basis;
    std::optional<int> predicted_index;

    bool stabilized() const
    {
        return stabilized_at.has_value();
    }
    bool agrees_with_prediction() const
    {
        return !predicted_index || *predicted_index == index;
    }
};

inline void require_stabilized(const IndexReport &r, const std::string &what = "operator index")
{
    if (!r.stabilized()) {
        const auto &last = r.history.back();
        throw Unstabilized(what + " did not stabilize up to window " + std::to_string(last.window) + " (ker "
                           + std::to_string(last.ker) + ", coker " + std::to_string(last.coker) + ")");
    }
}

namespace detail
{

template <typename T>
T entry_from(const Series &coefficient)
{
    if constexpr (std::is_same_v<T, Rational>) {
        return coefficient.scalar();
    } else {
        return coefficient;
    }
}

template <typename T>
T like_for(int level)
{
    if constexpr (std::is_same_v<T, Rational>) {
        (void)level;
        return Rational(0);
    } else {
        return Series::zero(level - 1);
    }
}

} // namespace detail

/// Matrix of op on span{t_n^j e_c : a <= j < b} read in t_n-degrees [a+shift, b+shift),
/// with coefficients in the inner field (Rational when n = 1). Column index (j-a)*r + c.
template <typename T>
Matrix<T> outer_window(const LinearOp &op, int a, int b)
{
    const int n = op.level;
    const int shift = op.shift[n - 1];
    const int rin = op.in_rank, rout = op.out_rank;
    const T zero = detail::like_for<T>(n);
    Matrix<T> m(static_cast<std::size_t>((b - a) * rout), static_cast<std::size_t>((b - a) * rin), zero);
    for (int j = a; j < b; ++j) {
        for (int c = 0; c < rin; ++c) {
            std::vector<Series> v(rin, Series::zero(n));
            v[c] = Series::variable(n, n, j);
            const auto image = op.apply(v);
            const std::size_t col = static_cast<std::size_t>((j - a) * rin + c);
            for (int c2 = 0; c2 < rout; ++c2) {
                const Series &s = image[c2];
                for (const auto &[k, coeff] : s.coefficients()) {
                    if (k < a + shift) {
                        throw WindowOverflow("operator shift is not minimal");
                    }
                    if (k >= b + shift) {
                        break;
                    }
                    m(static_cast<std::size_t>((k - a - shift) * rout + c2), col) = detail::entry_from<T>(coeff);
                }
                if (!s.outer_exact() && s.hi() < b + shift) {
                    throw WindowOverflow("operator image known only below t^" + std::to_string(s.hi()));
                }
            }
        }
    }
    return m;
}

/// Reference shift for nu^{-1} d: v(p) - 1 for the outer derivative coefficient p.
inline int reference_shift(const DiffOperator &op)
{
    const int n = op.level();
    const SeriesMatrix &p = op.derivative_coeffs()[n - 1];
    int best = 0;
    bool found = false;
    for (std::size_t i = 0; i < p.rows(); ++i) {
        for (std::size_t j = 0; j < p.cols(); ++j) {
            if (p(i, j).is_exact_zero()) {
                continue;
            }
            const int v = p(i, j).valuation() - 1;
            best = found ? std::min(best, v) : v;
            found = true;
        }
    }
    return found ? best : op.min_shift(n);
}

namespace detail
{

struct WindowResult {
    int ker = 0;
    int approx_ker = 0;
    std::vector<std::vector<Series>> basis;
};

template <typename T>
WindowResult window_kernel(const LinearOp &op, int w, int w_next, bool want_basis)
{
    const int n = op.level;
    const int r = op.in_rank;
    const T like = like_for<T>(n);
    const auto m = outer_window<T>(op, -w, w_next);
    const auto e = eliminate(m, like);
    WindowResult out;
    out.approx_ker = static_cast<int>(e.kernel.size());
    if (e.kernel.empty()) {
        return out;
    }
    // Persistence filter: project to [-w, w).
    const std::size_t keep = static_cast<std::size_t>(2 * w * r);
    Matrix<T> proj(keep, e.kernel.size(), like);
    for (std::size_t k = 0; k < e.kernel.size(); ++k) {
        for (std::size_t i = 0; i < keep; ++i) {
            proj(i, k) = e.kernel[k][i];
        }
    }
    const auto pe = eliminate(proj, like);
    out.ker = static_cast<int>(pe.rank);
    if (!want_basis) {
        return out;
    }
    for (std::size_t pc : pe.pivot_columns) {
        std::vector<Series> v;
        for (int c = 0; c < r; ++c) {
            std::map<int, Series> coeffs;
            for (int j = -w; j < w; ++j) {
                const T &x = proj(static_cast<std::size_t>((j + w) * r + c), pc);
                if (!field_ops<T>::is_exact_zero(x)) {
                    if constexpr (std::is_same_v<T, Rational>) {
                        coeffs.emplace(j, Series::constant(0, x));
                    } else {
                        coeffs.emplace(j, x);
                    }
                }
            }
            v.push_back(Series::from_coefficients(n, std::move(coeffs), w));
        }
        out.basis.push_back(std::move(v));
    }
    return out;
}

// Largest outer exponent of op(t^0 e_c) above the minimal shift; 0 when the
// image is truncated in the outer variable.
inline int upper_spread(const LinearOp &op)
{
    const int n = op.level;
    int spread = 0;
    for (int c = 0; c < op.in_rank; ++c) {
        std::vector<Series> v(op.in_rank, Series::zero(n));
        v[c] = Series::one(n);
        for (const Series &y : op.apply(v)) {
            if (!y.outer_exact() || y.coefficients().empty()) {
                continue;
            }
            spread = std::max(spread, y.coefficients().rbegin()->first - op.shift[n - 1]);
        }
    }
    return spread;
}

} // namespace detail

/// Kernel and lattice-normalised index of a k-linear (or inner-field-linear)
/// operator along the outer variable. Dims are computed on windows [-w, w)
/// of the schedule and accepted once two consecutive windows agree.
template <typename T>
IndexReport operator_index(const LinearOp &op, const IndexOptions &opt = {})
{
    if (op.in_rank != op.out_rank) {
        throw DimensionMismatch("operator_index needs a square operator");
    }
    const int n = op.level;
    const int r = op.in_rank;
    const int s_low = op.shift[n - 1];
    const int s_ref = opt.reference_shift.value_or(s_low);
    if (s_ref < s_low) {
        throw DimensionMismatch("reference shift below the operator's minimal shift");
    }
    // Index of the reference nu^{-1} d on L_a -> L_{a+s_low}, a <= 0.
    const int ref_index = -(s_ref - s_low) * r;

    std::vector<int> schedule;
    for (int w : opt.schedule) {
        if (w <= opt.max_window) {
            schedule.push_back(w);
        }
    }
    if (schedule.empty()) {
        throw DimensionMismatch("empty window schedule");
    }
    // Vectors near the top of a window miss equations; with a nilpotent
    // leading coefficient the missing constraints reach down one spread per
    // component, so the margin above each window is rank * spread.
    const int spread = detail::upper_spread(op) * r;
    IndexReport report;
    report.predicted_index = opt.predicted_index;
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        const int w = schedule[k];
        const int w_next = std::max(k + 1 < schedule.size() ? schedule[k + 1] : w + 8, w + spread + 1);
        auto res = detail::window_kernel<T>(op, w, w_next, opt.want_basis);
        const int op_index = res.ker - res.approx_ker;
        const int index = ref_index - op_index;
        WindowDims d{w, res.ker, res.ker - index};
        const bool agree = !report.history.empty() && report.history.back().ker == d.ker
                           && report.history.back().coker == d.coker;
        report.history.push_back(d);
        report.ker_dim = d.ker;
        report.coker_dim = d.coker;
        report.index = index;
        report.ker_basis = std::move(res.basis);
        if (agree && d.coker >= 0) {
            report.stabilized_at = w;
            break;
        }
    }
    return report;
}

/// operator_index for a first-order differential operator over k((t)) or
/// along the outer variable, with the reference taken from its leading term.
template <typename T = Rational>
IndexReport operator_index(const DiffOperator &op, IndexOptions opt = {})
{
    const int n = op.level();
    std::vector<int> shift(n, 0);
    shift[n - 1] = op.min_shift(n);
    if (!opt.reference_shift) {
        opt.reference_shift = reference_shift(op);
    }
    return operator_index<T>(op.as_linear_op(shift), opt);
}

struct CalkinCheck {
    bool iso = false;
    IndexReport report;
};

/// Iso in the Calkin model iff kernel and cokernel stabilize finite.
template <typename T = Rational>
CalkinCheck calkin_iso_check(const DiffOperator &op, const IndexOptions &opt = {})
{
    CalkinCheck c;
    IndexOptions o = opt;
    o.want_basis = false;
    c.report = operator_index<T>(op, o);
    c.iso = c.report.stabilized();
    return c;
}

} // namespace drep

#endif
