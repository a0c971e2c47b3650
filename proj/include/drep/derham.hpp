#ifndef DREP_DERHAM_HPP
#define DREP_DERHAM_HPP

#include <climits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <drep/connection.hpp>
#include <drep/diffop.hpp>
#include <drep/errors.hpp>
#include <drep/matrix.hpp>
#include <drep/series.hpp>
#include <drep/tate.hpp>

namespace drep
{

/// nu_1..nu_n: closed, F_n-independent one-forms.
struct FormTuple {
    std::vector<OneForm> nu;

    int level() const
    {
        return static_cast<int>(nu.size());
    }

    /// N(i, j) = j-th component of nu_i.
    SeriesMatrix component_matrix() const
    {
        const int n = level();
        SeriesMatrix m(n, n, Series::zero(n));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                m(i, j) = nu[i].components[j];
            }
        }
        return m;
    }

    void validate() const
    {
        const int n = level();
        if (n < 1) {
            throw DimensionMismatch("need at least one form");
        }
        for (const auto &w : nu) {
            if (static_cast<int>(w.components.size()) != n) {
                throw DimensionMismatch("form has " + std::to_string(w.components.size()) + " components, expected "
                                        + std::to_string(n));
            }
            w.validate();
        }
        const Series det = determinant(component_matrix(), Series::zero(n));
        if (det.is_zero()) {
            throw NotIndependent("forms are linearly dependent over F_" + std::to_string(n));
        }
        for (std::size_t i = 0; i < nu.size(); ++i) {
            try {
                require_closed(nu[i]);
            } catch (const NotClosed &e) {
                throw NotClosed("nu_" + std::to_string(i + 1) + ": " + e.what());
            }
        }
    }

    /// Vector fields V_j with nu_i(V_j) = delta_ij; V_j has components (N^{-1})_{kj}.
    std::vector<std::vector<Series>> dual_frame() const
    {
        const int n = level();
        const SeriesMatrix inv = inverse(component_matrix(), Series::zero(n));
        std::vector<std::vector<Series>> v(n, std::vector<Series>(n, Series::zero(n)));
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                v[j][k] = inv(k, j);
            }
        }
        return v;
    }

    /// True when each nu_i only has a dt_i component.
    bool diagonal() const
    {
        for (int i = 0; i < level(); ++i) {
            for (int j = 0; j < level(); ++j) {
                if (i != j && !nu[i].components[j].is_exact_zero()) {
                    return false;
                }
            }
        }
        return true;
    }

    FormTuple operator-() const
    {
        FormTuple out;
        for (const auto &w : nu) {
            out.nu.push_back(-w);
        }
        return out;
    }

    static FormTuple standard(int n)
    {
        FormTuple f;
        for (int i = 1; i <= n; ++i) {
            OneForm w;
            for (int j = 1; j <= n; ++j) {
                w.components.push_back(i == j ? Series::one(n) : Series::zero(n));
            }
            f.nu.push_back(std::move(w));
        }
        return f;
    }

    friend bool operator==(const FormTuple &, const FormTuple &) = default;
};

/// Edge M -> M u {i} of the cube, i 1-based.
struct CubeEdge {
    unsigned from = 0;
    unsigned to = 0;
    int direction = 1;
    bool nabla = true; // false: the nu_i (wedge) differential
    int sign = 1;
    DiffOperator op;
};

/// Objects E (x) <nu_M> all identified with E via the nu-wedge frame.
struct BinaryMultiComplex {
    Connection connection;
    FormTuple forms;
    std::vector<std::vector<Series>> frame; // V_1..V_n
    std::vector<CubeEdge> edges;

    int level() const
    {
        return connection.level();
    }
    std::size_t object_count() const
    {
        return std::size_t{1} << level();
    }
    const CubeEdge &edge(unsigned from, int direction, bool nabla) const
    {
        for (const auto &e : edges) {
            if (e.from == from && e.direction == direction && e.nabla == nabla) {
                return e;
            }
        }
        throw IndexOutOfRange("no such cube edge");
    }
    CubeEdge &edge(unsigned from, int direction, bool nabla)
    {
        return const_cast<CubeEdge &>(static_cast<const BinaryMultiComplex &>(*this).edge(from, direction, nabla));
    }
};

namespace detail
{

inline int popcount_below(unsigned m, int i)
{
    int c = 0;
    for (int j = 1; j < i; ++j) {
        c += (m >> (j - 1)) & 1u;
    }
    return c;
}

inline int popcount_above(unsigned m, int i, int n)
{
    int c = 0;
    for (int j = i + 1; j <= n; ++j) {
        c += (m >> (j - 1)) & 1u;
    }
    return c;
}

} // namespace detail

inline BinaryMultiComplex build_multicomplex(const Connection &c, const FormTuple &nu)
{
    c.validate();
    if (nu.level() != c.level()) {
        throw LevelMismatch("form tuple and connection live on different fields");
    }
    nu.validate();
    require_flat(c);
    BinaryMultiComplex b;
    b.connection = c;
    b.forms = nu;
    b.frame = nu.dual_frame();
    const int n = c.level();
    const unsigned count = 1u << n;
    const SeriesMatrix id = identity_matrix(c.rank, n);
    for (unsigned m = 0; m < count; ++m) {
        for (int i = 1; i <= n; ++i) {
            const unsigned bit = 1u << (i - 1);
            if (m & bit) {
                continue;
            }
            const int s_nabla = detail::popcount_below(m, i) % 2 == 0 ? 1 : -1;
            const int s_nu = detail::popcount_above(m, i, n) % 2 == 0 ? 1 : -1;
            DiffOperator t = c.along(b.frame[i - 1]);
            b.edges.push_back({m, m | bit, i, true, s_nabla, s_nabla == 1 ? t : -t});
            DiffOperator w = DiffOperator::multiplication(n, s_nu == 1 ? id : -id);
            b.edges.push_back({m, m | bit, i, false, s_nu, w});
        }
    }
    return b;
}

/// Moves t_1 outermost in an exactly represented element of F_2.
inline Series swap_variables(const Series &x)
{
    if (x.level() != 2) {
        throw LevelMismatch("variable swap is implemented for F_2");
    }
    if (!x.exact()) {
        throw InsufficientPrecision("variable swap needs exactly represented data");
    }
    std::map<int, std::map<int, Series>> by_t1;
    for_each_term(x, [&](const std::vector<int> &e, const Rational &q) {
        by_t1[e[0]].emplace(e[1], Series::constant(0, q));
    });
    std::map<int, Series> outer;
    for (auto &[a, inner] : by_t1) {
        outer.emplace(a, Series::from_coefficients(1, std::move(inner)));
    }
    return Series::from_coefficients(2, std::move(outer));
}

inline SeriesMatrix swap_variables(const SeriesMatrix &m)
{
    return m.map([](const Series &x) { return swap_variables(x); });
}

/// The same operator with the roles of t_1 and t_2 exchanged.
inline DiffOperator swap_variables(const DiffOperator &op)
{
    std::vector<SeriesMatrix> p{swap_variables(op.derivative_coeffs()[1]), swap_variables(op.derivative_coeffs()[0])};
    return {2, std::move(p), swap_variables(op.multiplier())};
}

/// Kernel/cokernel of an operator in the t_i-direction, inner-field-linear,
/// with the t_i-exponent ranges of kernel leaders and cokernel classes.
struct DirectionalProfile {
    int direction = 1;
    IndexReport report;
    int ker_lo = 0, ker_hi = 0; // leading t_i-exponents of the kernel basis
    int defect_width = 0;       // lattice defect rows s_ref - s_low

    bool bounded() const
    {
        return report.stabilized();
    }
};

namespace detail
{

inline int leading_exponent(const std::vector<Series> &v)
{
    int best = INT_MAX;
    for (const auto &x : v) {
        if (!x.is_exact_zero() && !x.coefficients().empty()) {
            best = std::min(best, x.coefficients().begin()->first);
        }
    }
    return best;
}

} // namespace detail

/// Profile of an operator y -> P_i d_i y + Q y along direction i (n <= 2).
inline DirectionalProfile directional_profile(const DiffOperator &op, int direction, const IndexOptions &opt = {})
{
    const int n = op.level();
    DirectionalProfile p;
    p.direction = direction;
    for (int j = 1; j <= n; ++j) {
        if (j != direction && !is_exact_zero(op.derivative_coeffs()[j - 1])) {
            throw UnsupportedFrame("operator differentiates in more than one direction");
        }
    }
    if (n == 1) {
        p.report = operator_index<Rational>(op, opt);
    } else if (n == 2) {
        const DiffOperator o = direction == 2 ? op : swap_variables(op);
        p.report = operator_index<Series>(o, opt);
        p.defect_width = reference_shift(o) - o.min_shift(2);
    } else {
        throw UnsupportedFrame("directional profiles are implemented for n <= 2");
    }
    if (n == 1) {
        p.defect_width = reference_shift(op) - op.min_shift(1);
    }
    if (!p.report.ker_basis.empty()) {
        p.ker_lo = INT_MAX;
        p.ker_hi = INT_MIN;
        for (const auto &v : p.report.ker_basis) {
            const int e = detail::leading_exponent(v);
            p.ker_lo = std::min(p.ker_lo, e);
            p.ker_hi = std::max(p.ker_hi, e + 1);
        }
    }
    return p;
}

/// nabla_V for V = a_i d_i, profiled in direction i.
inline DirectionalProfile directional_kernel_profile(const Connection &c, const std::vector<Series> &v,
                                                     const IndexOptions &opt = {})
{
    int direction = 0;
    for (int j = 1; j <= c.level(); ++j) {
        if (!v[j - 1].is_exact_zero()) {
            if (direction != 0) {
                throw UnsupportedFrame("vector field must point along a single coordinate direction");
            }
            direction = j;
        }
    }
    if (direction == 0) {
        throw DimensionMismatch("vector field is zero");
    }
    return directional_profile(c.along(v), direction, opt);
}

struct SquareFailure {
    unsigned from = 0;
    int i = 0, k = 0;
    std::string kind;
};

struct MulticomplexReport {
    bool squares_ok = true;
    std::vector<SquareFailure> square_failures;
    bool acyclic = true;
    std::vector<std::string> acyclicity_failures;
    std::vector<DirectionalProfile> profiles;
};

namespace detail
{

// Laurent-polynomial test sections spanning several exponents in every variable.
inline std::vector<std::vector<Series>> test_sections(int level, int rank)
{
    std::vector<std::vector<Series>> out;
    const std::vector<std::vector<int>> exps = level == 1
                                                   ? std::vector<std::vector<int>>{{-2}, {0}, {3}}
                                                   : std::vector<std::vector<int>>{{-2, 1}, {0, 0}, {3, -1}, {1, 2}};
    for (int c = 0; c < rank; ++c) {
        for (const auto &e : exps) {
            std::vector<Series> v(rank, Series::zero(level));
            Series x = Series::monomial(level, e);
            std::vector<int> e2 = e;
            for (auto &a : e2) {
                a += 1;
            }
            x += Series::monomial(level, e2, Rational(c + 2, 3));
            v[c] = x;
            out.push_back(std::move(v));
        }
    }
    return out;
}

inline std::vector<Series> add(std::vector<Series> a, const std::vector<Series> &b)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] += b[i];
    }
    return a;
}

inline std::vector<Series> sub(std::vector<Series> a, const std::vector<Series> &b)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] -= b[i];
    }
    return a;
}

inline bool all_zero(const std::vector<Series> &v)
{
    for (const auto &x : v) {
        if (!x.is_zero()) {
            return false;
        }
    }
    return true;
}

} // namespace detail

/// Square identities (up to precision) and directional Calkin acyclicity.
inline MulticomplexReport check_multicomplex(const BinaryMultiComplex &b, const IndexOptions &opt = {})
{
    MulticomplexReport rep;
    const int n = b.level();
    const auto sections = detail::test_sections(n, b.connection.rank);
    for (unsigned m = 0; m < b.object_count(); ++m) {
        for (int i = 1; i <= n; ++i) {
            for (int k = i + 1; k <= n; ++k) {
                const unsigned bi = 1u << (i - 1), bk = 1u << (k - 1);
                if ((m & bi) || (m & bk)) {
                    continue;
                }
                struct Kind {
                    bool first_nabla, second_nabla;
                    bool anti;
                    const char *name;
                };
                const Kind kinds[] = {{true, true, true, "nabla-nabla anticommute"},
                                      {false, false, true, "nu-nu anticommute"},
                                      {true, false, false, "nabla_i/nu_k commute"},
                                      {false, true, false, "nu_i/nabla_k commute"}};
                for (const auto &kd : kinds) {
                    // path via i: edge i (family first_nabla) at m, then edge k (family second_nabla)
                    const auto &a1 = b.edge(m, i, kd.first_nabla);
                    const auto &a2 = b.edge(m | bi, k, kd.second_nabla);
                    // path via k: edge k (family second_nabla) at m, then edge i (family first_nabla)
                    const auto &c1 = b.edge(m, k, kd.second_nabla);
                    const auto &c2 = b.edge(m | bk, i, kd.first_nabla);
                    bool ok = true;
                    for (const auto &s : sections) {
                        const auto p = a2.op(a1.op(s));
                        const auto q = c2.op(c1.op(s));
                        if (!detail::all_zero(kd.anti ? detail::add(p, q) : detail::sub(p, q))) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok) {
                        rep.squares_ok = false;
                        rep.square_failures.push_back({m, i, k, kd.name});
                    }
                }
            }
        }
    }
    for (const auto &e : b.edges) {
        const std::string where = "edge " + std::to_string(e.from) + "->" + std::to_string(e.to) + " ("
                                  + (e.nabla ? "nabla" : "nu") + ", direction " + std::to_string(e.direction) + ")";
        try {
            auto p = directional_profile(e.op, e.direction, opt);
            if (!p.bounded()) {
                rep.acyclic = false;
                const auto &h = p.report.history;
                rep.acyclicity_failures.push_back(where + ": kernel grows " + std::to_string(h.front().ker) + " -> "
                                                  + std::to_string(h.back().ker) + " over windows "
                                                  + std::to_string(h.front().window) + ".."
                                                  + std::to_string(h.back().window));
            }
            rep.profiles.push_back(std::move(p));
        } catch (const error &ex) {
            rep.acyclic = false;
            rep.acyclicity_failures.push_back(where + ": " + ex.what());
        }
    }
    return rep;
}

/// Induced-connection data of an inner-field vector space carrying the action of nabla_1.
struct FibreModule {
    SeriesMatrix a; // d_1 + a on K^d, K = k((t_1))
    int dim() const
    {
        return static_cast<int>(a.rows());
    }
};

namespace detail
{

// Coefficients (level-1) of a level-2 vector at t_2-exponents [lo, hi), index (k-lo)*r + c.
inline std::vector<Series> fibre_coordinates(const std::vector<Series> &v, int lo, int hi)
{
    std::vector<Series> out;
    out.reserve(static_cast<std::size_t>((hi - lo)) * v.size());
    for (int k = lo; k < hi; ++k) {
        for (const auto &x : v) {
            out.push_back(x.coefficient(k));
        }
    }
    return out;
}

// Matrix a with nabla(y_i) = sum_j a(j, i) y_j, given coordinates of the basis y_i
// and of nabla(y_i); solved on a set of independent coordinate rows.
inline SeriesMatrix induced_matrix(const std::vector<std::vector<Series>> &basis,
                                   const std::vector<std::vector<Series>> &images)
{
    const std::size_t d = basis.size();
    if (d == 0) {
        return SeriesMatrix(0, 0, Series::zero(1));
    }
    const std::size_t len = basis.front().size();
    const Series like = Series::zero(1);
    SeriesMatrix bt(d, len, like);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < len; ++k) {
            bt(i, k) = basis[i][k];
        }
    }
    const auto e = eliminate(bt, like);
    if (e.rank < d) {
        throw UndeterminedPivot("fibre basis is not independent");
    }
    SeriesMatrix sq(d, d, like);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t i = 0; i < d; ++i) {
            sq(r, i) = basis[i][e.pivot_columns[r]];
        }
    }
    SeriesMatrix out(d, d, like);
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<Series> rhs(d, like);
        for (std::size_t r = 0; r < d; ++r) {
            rhs[r] = images[i][e.pivot_columns[r]];
        }
        const auto x = solve(sq, rhs, like);
        if (!x) {
            throw UndeterminedPivot("induced action does not preserve the fibre");
        }
        for (std::size_t j = 0; j < d; ++j) {
            out(j, i) = (*x)[j];
        }
    }
    return out;
}

inline void require_nonnegative_t2(const SeriesMatrix &a1)
{
    for (std::size_t i = 0; i < a1.rows(); ++i) {
        for (std::size_t j = 0; j < a1.cols(); ++j) {
            const Series &x = a1(i, j);
            if (!x.coefficients().empty() && x.coefficients().begin()->first < 0) {
                throw UnsupportedFrame("A_1 has negative t_2-powers; lattices are not preserved");
            }
        }
    }
}

} // namespace detail

/// H^0 of nabla_2 over K with the induced nabla_1: persistent kernel over K.
inline FibreModule fibre_kernel(const Connection &c, const IndexOptions &opt, IndexReport *report = nullptr)
{
    IndexOptions o = opt;
    o.want_basis = true;
    const IndexReport r = operator_index<Series>(c.covariant(2), o);
    require_stabilized(r, "fibre kernel");
    if (report) {
        *report = r;
    }
    const int w = *r.stabilized_at;
    const DiffOperator t1 = c.covariant(1);
    std::vector<std::vector<Series>> basis, images;
    for (const auto &y : r.ker_basis) {
        basis.push_back(detail::fibre_coordinates(y, -w, w));
        images.push_back(detail::fibre_coordinates(t1(y), -w, w));
    }
    return {detail::induced_matrix(basis, images)};
}

/// Lattice defect T_2(L_N) / L_ref inside L_{N+s_low} / L_{N+s_ref} with the induced nabla_1.
inline FibreModule lattice_defect(const Connection &c, int big_n)
{
    const int r = c.rank;
    const DiffOperator t2 = c.covariant(2);
    const int s_low = t2.min_shift(2);
    const int s_ref = reference_shift(t2);
    const int delta = s_ref - s_low;
    if (delta <= 0) {
        return {SeriesMatrix(0, 0, Series::zero(1))};
    }
    detail::require_nonnegative_t2(c.a[0]);
    const int base = big_n + s_low;
    std::vector<std::vector<Series>> cols;
    for (int j = 0; j < delta; ++j) {
        for (int cc = 0; cc < r; ++cc) {
            std::vector<Series> v(r, Series::zero(2));
            v[cc] = Series::variable(2, 2, big_n + j);
            cols.push_back(detail::fibre_coordinates(t2(v), base, base + delta));
        }
    }
    const Series like = Series::zero(1);
    SeriesMatrix w(static_cast<std::size_t>(delta * r), cols.size(), like);
    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (std::size_t i = 0; i < cols[j].size(); ++i) {
            w(i, j) = cols[j][i];
        }
    }
    const auto e = eliminate(w, like);
    // nabla_1 on L_{N+s_low}/L_{N+s_ref}: d_1 + sum_m A_1[m] t_2^m.
    const std::size_t dim = static_cast<std::size_t>(delta * r);
    SeriesMatrix g(dim, dim, like);
    for (int m = 0; m < delta; ++m) {
        for (int a = 0; a < r; ++a) {
            for (int b = 0; b < r; ++b) {
                const Series coeff = c.a[0](a, b).coefficient(m);
                if (coeff.is_exact_zero()) {
                    continue;
                }
                for (int k = 0; k + m < delta; ++k) {
                    g(static_cast<std::size_t>((k + m) * r + a), static_cast<std::size_t>(k * r + b)) = coeff;
                }
            }
        }
    }
    std::vector<std::vector<Series>> basis, images;
    for (std::size_t pc : e.pivot_columns) {
        std::vector<Series> v = cols[pc];
        std::vector<Series> img = drep::apply(g, v);
        for (std::size_t i = 0; i < v.size(); ++i) {
            img[i] += derive(v[i], 1);
        }
        basis.push_back(std::move(v));
        images.push_back(std::move(img));
    }
    return {detail::induced_matrix(basis, images)};
}

inline Connection as_connection(const FibreModule &m)
{
    Connection c = Connection::trivial(TowerField::standard(1), m.dim());
    c.a[0] = m.a;
    return c;
}

/// Dual module: d_1 - a^T.
inline FibreModule dual(const FibreModule &m)
{
    return {-m.a.transposed()};
}

/// (ker, coker, index) of d_1 + a over k((t_1)) in the lattice-normalised model.
inline IndexReport module_index(const FibreModule &m, const IndexOptions &opt)
{
    if (m.dim() == 0) {
        IndexReport r;
        r.stabilized_at = opt.schedule.front();
        r.history.push_back({opt.schedule.front(), 0, 0});
        return r;
    }
    IndexOptions o = opt;
    o.want_basis = false;
    return operator_index<Rational>(DiffOperator::covariant(1, 1, m.a), o);
}

/// Fibrewise data of nabla_2 with the induced nabla_1, for n = 2.
struct FibreData {
    FibreModule h0;        // ker nabla_2
    FibreModule coker;     // genuine cokernel, dual to ker of the dual
    FibreModule defect;    // lattice defect
    IndexReport fibre_report;
};

inline FibreData fibre_data(const Connection &c, const IndexOptions &opt)
{
    if (c.level() != 2) {
        throw LevelMismatch("fibre data is defined for n = 2");
    }
    FibreData f;
    f.h0 = fibre_kernel(c, opt, &f.fibre_report);
    f.coker = dual(fibre_kernel(dual(c), opt));
    f.defect = lattice_defect(c, 2 * std::max(opt.max_window, opt.schedule.back()) + 1);
    if (f.defect.dim() != -f.fibre_report.index) {
        throw UnsupportedFrame("lattice defect is not a quotient of the image lattice (dim "
                               + std::to_string(f.defect.dim()) + ", expected "
                               + std::to_string(-f.fibre_report.index) + ")");
    }
    return f;
}

struct CohomologyReport {
    int level = 1;
    std::vector<int> dims;               // H^0..H^n
    std::vector<std::vector<int>> e2;    // e2[p][q], n = 2
    bool stabilized = true;
    std::vector<std::string> statuses;   // per computed index
    std::optional<int> h0_cross_check;   // n = 2: joint kernel on 2-D boxes

    int euler() const
    {
        int e = 0;
        for (std::size_t i = 0; i < dims.size(); ++i) {
            e += (i % 2 == 0 ? 1 : -1) * dims[i];
        }
        return e;
    }
    int e2_euler() const
    {
        int e = 0;
        for (std::size_t p = 0; p < e2.size(); ++p) {
            for (std::size_t q = 0; q < e2[p].size(); ++q) {
                e += ((p + q) % 2 == 0 ? 1 : -1) * e2[p][q];
            }
        }
        return e;
    }
};

namespace detail
{

inline std::string status_text(const std::string &what, const IndexReport &r)
{
    return what + ": " + (r.stabilized() ? "stabilized at " + std::to_string(*r.stabilized_at) : "unstabilized");
}

} // namespace detail

/// Persistent joint kernel of nabla_1, nabla_2 on boxes [-w, w)^2 inside [-w, w_next)^2.
inline int joint_kernel_dim_2d(const Connection &c, int w, int w_next)
{
    const int r = c.rank;
    ExponentBox box{{-w, -w}, {w_next, w_next}, r};
    std::vector<WindowMatrix> blocks;
    for (int i = 1; i <= 2; ++i) {
        const DiffOperator t = c.covariant(i);
        std::vector<int> shift{0, 0};
        shift[i - 1] = t.min_shift(i);
        blocks.push_back(window_matrix(t.as_linear_op(shift), box, Overflow::truncate));
    }
    const std::size_t cols = blocks[0].col_labels.size();
    RationalMatrix m(blocks[0].matrix.rows() + blocks[1].matrix.rows(), cols, Rational(0));
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < blocks[0].matrix.rows(); ++i) {
            m(i, j) = blocks[0].matrix(i, j);
        }
        for (std::size_t i = 0; i < blocks[1].matrix.rows(); ++i) {
            m(blocks[0].matrix.rows() + i, j) = blocks[1].matrix(i, j);
        }
    }
    const auto e = eliminate(m, Rational(0));
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < cols; ++j) {
        const auto &ex = blocks[0].col_labels[j].exponents;
        if (ex[0] < w && ex[1] < w) {
            keep.push_back(j);
        }
    }
    if (e.kernel.empty()) {
        return 0;
    }
    RationalMatrix proj(keep.size(), e.kernel.size(), Rational(0));
    for (std::size_t k = 0; k < e.kernel.size(); ++k) {
        for (std::size_t i = 0; i < keep.size(); ++i) {
            proj(i, k) = e.kernel[k][keep[i]];
        }
    }
    return static_cast<int>(rank(proj, Rational(0)));
}

/// dim H^i of the de Rham complex of (E, nabla), n in {1, 2}.
inline CohomologyReport cohomology_dims(const Connection &c, const IndexOptions &opt = {})
{
    c.validate();
    require_flat(c);
    CohomologyReport rep;
    rep.level = c.level();
    if (c.level() == 1) {
        IndexOptions o = opt;
        o.want_basis = false;
        const auto r = operator_index<Rational>(c.covariant(1), o);
        rep.dims = {r.ker_dim, r.coker_dim};
        rep.stabilized = r.stabilized();
        rep.statuses.push_back(detail::status_text("nabla", r));
        return rep;
    }
    if (c.level() != 2) {
        throw UnsupportedFrame("cohomology is implemented for n in {1, 2}");
    }
    const FibreData f = fibre_data(c, opt);
    rep.statuses.push_back(detail::status_text("fibre nabla_2", f.fibre_report));
    const auto r0 = module_index(f.h0, opt);
    const auto rc = module_index(f.coker, opt);
    const auto rd = module_index(f.defect, opt);
    rep.statuses.push_back(detail::status_text("E2 row 0", r0));
    rep.statuses.push_back(detail::status_text("E2 row 1 (cokernel)", rc));
    rep.statuses.push_back(detail::status_text("E2 row 1 (defect)", rd));
    rep.stabilized = r0.stabilized() && rc.stabilized() && rd.stabilized();
    rep.e2 = {{r0.ker_dim, rc.ker_dim + rd.ker_dim}, {r0.coker_dim, rc.coker_dim + rd.coker_dim}};
    rep.dims = {rep.e2[0][0], rep.e2[1][0] + rep.e2[0][1], rep.e2[1][1]};
    rep.h0_cross_check = joint_kernel_dim_2d(c, 6, 8);
    return rep;
}

} // namespace drep

#endif
