#ifndef DREP_EPSILON_HPP
#define DREP_EPSILON_HPP

#include <optional>
#include <string>
#include <vector>

#include <drep/connection.hpp>
#include <drep/derham.hpp>
#include <drep/errors.hpp>
#include <drep/matrix.hpp>
#include <drep/tate.hpp>
#include <drep/window.hpp>

namespace drep
{

enum class DetStatus { stabilized, non_stabilizing, undefined };

inline std::string to_string(DetStatus s)
{
    switch (s) {
    case DetStatus::stabilized:
        return "stabilized";
    case DetStatus::non_stabilizing:
        return "non-stabilizing";
    default:
        return "undefined";
    }
}

struct RelativeDeterminant {
    Rational ratio;
    std::string normalization;
    DetStatus status = DetStatus::undefined;
    std::vector<std::pair<int, Rational>> trace; // (window, ratio)
};

struct GradedLine {
    int degree = 0;
    std::optional<RelativeDeterminant> det;
};

struct EpsilonResult {
    GradedLine line;
    std::vector<std::pair<std::string, IndexReport>> reports;
};

/// mu_nu^{-1} o nabla in direction i: nabla along the dual frame vector V_i.
inline DiffOperator epsilon_operator(const Connection &c, const FormTuple &nu, int i)
{
    return c.along(nu.dual_frame()[i - 1]);
}

/// Degree of the graded line: the lattice-normalised index of mu^{-1} nabla (n = 1),
/// iterated through the fibres of t_2 (n = 2).
inline EpsilonResult epsilon_degree(const Connection &c, const FormTuple &nu, const IndexOptions &opt = {})
{
    c.validate();
    if (nu.level() != c.level()) {
        throw LevelMismatch("form tuple and connection live on different fields");
    }
    nu.validate();
    require_flat(c);
    EpsilonResult out;
    if (c.level() == 1) {
        IndexOptions o = opt;
        o.want_basis = false;
        auto r = operator_index<Rational>(epsilon_operator(c, nu, 1), o);
        require_stabilized(r, "epsilon index");
        out.line.degree = r.index;
        out.reports.emplace_back("nabla_1", std::move(r));
        return out;
    }
    if (c.level() != 2) {
        throw UnsupportedFrame("epsilon degree is implemented for n in {1, 2}");
    }
    if (!nu.diagonal()) {
        throw UnsupportedFrame("n = 2 epsilon degree needs a diagonal frame nu_i = g_i dt_i");
    }
    for (int i = 0; i < 2; ++i) {
        const Series &g = nu.nu[i].components[i];
        for_each_term(g, [&](const std::vector<int> &e, const Rational &) {
            if (e[1 - i] != 0) {
                throw UnsupportedFrame("nu_" + std::to_string(i + 1) + " must depend on t_" + std::to_string(i + 1)
                                       + " only");
            }
        });
    }
    const FibreData f = fibre_data(c, opt);
    auto r0 = module_index(f.h0, opt);
    auto rc = module_index(f.coker, opt);
    auto rd = module_index(f.defect, opt);
    require_stabilized(r0, "fibre kernel index");
    require_stabilized(rc, "fibre cokernel index");
    require_stabilized(rd, "lattice defect index");
    out.line.degree = r0.index - rc.index - rd.index;
    out.reports.emplace_back("fibre nabla_2", f.fibre_report);
    out.reports.emplace_back("H0 fibre", std::move(r0));
    out.reports.emplace_back("H1 fibre cokernel", std::move(rc));
    out.reports.emplace_back("H1 fibre defect", std::move(rd));
    return out;
}

namespace detail
{

// Product of the nonzero eigenvalues: determinant of the restriction to the
// stable image of m (Fitting decomposition).
inline std::optional<Rational> pseudo_determinant(const RationalMatrix &m)
{
    const std::size_t n = m.rows();
    RationalMatrix basis = RationalMatrix::identity(n, Rational(0));
    std::size_t dim = n;
    for (;;) {
        const RationalMatrix img = m * basis;
        const auto e = eliminate(RationalMatrix(img), Rational(0));
        if (e.rank == dim) {
            break;
        }
        dim = e.rank;
        RationalMatrix next(n, dim, Rational(0));
        for (std::size_t k = 0; k < dim; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                next(i, k) = img(i, e.pivot_columns[k]);
            }
        }
        basis = std::move(next);
        if (dim == 0) {
            return std::nullopt;
        }
    }
    if (dim == 0) {
        return std::nullopt;
    }
    // m B = B M, solved on independent rows of B.
    const auto rows = eliminate(basis.transposed(), Rational(0)).pivot_columns;
    RationalMatrix sq(dim, dim, Rational(0));
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t k = 0; k < dim; ++k) {
            sq(r, k) = basis(rows[r], k);
        }
    }
    const RationalMatrix sq_inv = inverse(sq, Rational(0));
    const RationalMatrix mb = m * basis;
    RationalMatrix rhs(dim, dim, Rational(0));
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t k = 0; k < dim; ++k) {
            rhs(r, k) = mb(rows[r], k);
        }
    }
    return determinant(RationalMatrix(sq_inv * rhs), Rational(0));
}

inline RationalMatrix epsilon_window(const DiffOperator &op, int shift, int w, int rank)
{
    return window_matrix(op.as_linear_op({shift}), ExponentBox::interval(-w, w, rank), Overflow::truncate).matrix;
}

} // namespace detail

/// Ratio of window (pseudo-)determinants of mu^{-1} nabla for C and C_ref, n = 1.
inline RelativeDeterminant epsilon_det_rel(const Connection &c, const Connection &ref, const FormTuple &nu,
                                           const IndexOptions &opt = {})
{
    if (c.level() != 1 || ref.level() != 1) {
        throw UnsupportedFrame("relative determinants are implemented for n = 1");
    }
    if (c.rank != ref.rank) {
        throw DimensionMismatch("connections of different rank");
    }
    const int d1 = epsilon_degree(c, nu, opt).line.degree;
    const int d2 = epsilon_degree(ref, nu, opt).line.degree;
    if (d1 != d2) {
        throw DegreeMismatch("epsilon degrees differ: " + std::to_string(d1) + " vs " + std::to_string(d2));
    }
    const DiffOperator t = epsilon_operator(c, nu, 1);
    const DiffOperator tr = epsilon_operator(ref, nu, 1);
    const int shift = reference_shift(tr);
    RelativeDeterminant out;
    out.normalization = "reference connection of rank " + std::to_string(ref.rank)
                        + "; windows [-w, w) -> [-w+s, w+s), s = " + std::to_string(shift)
                        + ", basis ordered by exponent then component; pseudo-determinants";
    for (int w : opt.schedule) {
        if (w > opt.max_window) {
            break;
        }
        const auto a = detail::pseudo_determinant(detail::epsilon_window(t, shift, w, c.rank));
        const auto b = detail::pseudo_determinant(detail::epsilon_window(tr, shift, w, c.rank));
        if (!a || !b) {
            throw SingularWindow("window " + std::to_string(w) + " has no nonzero spectrum");
        }
        const Rational q = *a / *b;
        const bool same = !out.trace.empty() && out.trace.back().second == q;
        out.trace.emplace_back(w, q);
        out.ratio = q;
        if (same) {
            out.status = DetStatus::stabilized;
            return out;
        }
    }
    out.status = DetStatus::non_stabilizing;
    return out;
}

struct InductionCheck {
    int upstairs = 0;
    int downstairs = 0;
    bool ok = false;
};

inline FormTuple pullback(const FormTuple &nu, const KummerCover &k)
{
    FormTuple out;
    for (const auto &w : nu.nu) {
        out.nu.push_back(pullback(w, k));
    }
    return out;
}

/// epsilon(C, pullback nu) on the cover against epsilon(Ind C, nu) downstairs.
inline InductionCheck verify_induction(const Connection &upstairs, const KummerCover &k, const FormTuple &nu,
                                       const IndexOptions &opt = {})
{
    InductionCheck out;
    out.upstairs = epsilon_degree(upstairs, pullback(nu, k), opt).line.degree;
    out.downstairs = epsilon_degree(induct(upstairs, k), nu, opt).line.degree;
    out.ok = out.upstairs == out.downstairs;
    return out;
}

struct DualityCheck {
    int original = 0;
    int dual_side = 0;
    bool ok = false;
};

/// epsilon(dual C, -nu) against sigma * epsilon(C, nu).
inline DualityCheck verify_duality(const Connection &c, const FormTuple &nu, int sigma, const IndexOptions &opt = {})
{
    if (sigma != 1 && sigma != -1) {
        throw DimensionMismatch("sign convention must be +1 or -1");
    }
    DualityCheck out;
    out.original = epsilon_degree(c, nu, opt).line.degree;
    out.dual_side = epsilon_degree(dual(c), -nu, opt).line.degree;
    out.ok = out.dual_side == sigma * out.original;
    return out;
}

/// <u, v> = u^T v.
inline Series pairing(const std::vector<Series> &u, const std::vector<Series> &v)
{
    Series acc = Series::zero(u.front().level());
    for (std::size_t i = 0; i < u.size(); ++i) {
        acc += u[i] * v[i];
    }
    return acc;
}

/// Res(<nabla_i s, t> + <s, nabla^dual_i t>); zero for every section and cosection.
inline Rational residue_adjunction_defect(const Connection &c, const std::vector<Series> &s,
                                          const std::vector<Series> &t, int i)
{
    const Series lhs = pairing(c.covariant(i)(s), t);
    const Series rhs = pairing(s, dual(c).covariant(i)(t));
    return residue(lhs + rhs);
}

} // namespace drep

#endif
