#ifndef DREP_REPORT_HPP
#define DREP_REPORT_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <drep/derham.hpp>
#include <drep/dmodule.hpp>
#include <drep/epsilon.hpp>
#include <drep/spec.hpp>

namespace drep
{

/// Ordered key-value report; the field order is part of the format.
struct Report {
    std::vector<std::pair<std::string, std::string>> fields;
    int exit_code = 0;
    std::string diagnostic; // written to the error stream when non-empty

    void add(std::string key, std::string value)
    {
        fields.emplace_back(std::move(key), std::move(value));
    }
    void add(std::string key, int value)
    {
        add(std::move(key), std::to_string(value));
    }
    void add(std::string key, bool value)
    {
        add(std::move(key), std::string(value ? "true" : "false"));
    }
    void add(std::string key, const char *value)
    {
        add(std::move(key), std::string(value));
    }
};

enum class ReportFormat { kv, json_like };

struct RunOptions {
    std::optional<int> precision;
    int max_window = 32;
    unsigned seed = 0;
};

/// `key = value` per line, or a flat object with string values.
inline std::string render(const Report &r, ReportFormat f)
{
    std::string out;
    if (f == ReportFormat::kv) {
        for (const auto &[k, v] : r.fields) {
            out += k + " = " + v + "\n";
        }
        return out;
    }
    auto quote = [](const std::string &s) {
        std::string q = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') {
                q += '\\';
            }
            q += c;
        }
        return q + "\"";
    };
    out = "{\n";
    for (std::size_t i = 0; i < r.fields.size(); ++i) {
        out += "  " + quote(r.fields[i].first) + ": " + quote(r.fields[i].second)
               + (i + 1 < r.fields.size() ? ",\n" : "\n");
    }
    return out + "}\n";
}

/// 2 for Unstabilized, 3 for every other library error.
inline int exit_code_for(const error &e)
{
    return e.code() == "Unstabilized" ? 2 : 3;
}

namespace detail
{

inline IndexOptions index_options(const RunOptions &o)
{
    IndexOptions opt;
    opt.max_window = o.max_window;
    std::vector<int> s;
    for (int w : opt.schedule) {
        if (w <= o.max_window) {
            s.push_back(w);
        }
    }
    for (int w = (s.empty() ? 0 : s.back()) + 8; w <= o.max_window; w += 8) {
        s.push_back(w);
    }
    if (s.empty()) {
        throw DimensionMismatch("max-window must be at least 8");
    }
    opt.schedule = s;
    return opt;
}

inline std::string join_ints(const std::vector<int> &v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? " " : "") + std::to_string(v[i]);
    }
    return out;
}

inline void add_index_report(Report &r, const std::string &prefix, const IndexReport &ir)
{
    r.add(prefix + ".ker", ir.ker_dim);
    r.add(prefix + ".coker", ir.coker_dim);
    r.add(prefix + ".index", ir.index);
    r.add(prefix + ".stabilized_at", ir.stabilized_at ? std::to_string(*ir.stabilized_at) : std::string("none"));
    std::string h;
    for (const auto &w : ir.history) {
        h += (h.empty() ? "" : " ") + std::to_string(w.window) + ":" + std::to_string(w.ker) + "/"
             + std::to_string(w.coker);
    }
    r.add(prefix + ".history", h);
}

inline void require_level_one(const Connection &c, const std::string &what)
{
    if (c.level() != 1) {
        throw UnsupportedFrame(what + " is implemented over F_1 only");
    }
}

inline void run_cohomology(Report &r, const Connection &c, const IndexOptions &opt)
{
    const auto rep = cohomology_dims(c, opt);
    for (std::size_t i = 0; i < rep.dims.size(); ++i) {
        r.add("h" + std::to_string(i), rep.dims[i]);
    }
    r.add("euler", rep.euler());
    if (!rep.e2.empty()) {
        for (std::size_t p = 0; p < rep.e2.size(); ++p) {
            for (std::size_t q = 0; q < rep.e2[p].size(); ++q) {
                r.add("e2." + std::to_string(p) + "." + std::to_string(q), rep.e2[p][q]);
            }
        }
    }
    if (rep.h0_cross_check) {
        r.add("h0_cross_check", *rep.h0_cross_check);
    }
    r.add("stabilized", rep.stabilized);
    for (std::size_t i = 0; i < rep.statuses.size(); ++i) {
        r.add("status." + std::to_string(i + 1), rep.statuses[i]);
    }
    if (!rep.stabilized) {
        r.exit_code = 2;
        r.diagnostic = "Unstabilized: cohomology windows did not stabilize";
    }
}

inline void add_series_vector(Report &r, const std::string &prefix, const std::vector<Series> &v,
                              const std::vector<std::string> &names)
{
    for (std::size_t i = 0; i < v.size(); ++i) {
        r.add(prefix + "." + std::to_string(i + 1), to_string(v[i], names));
    }
}

inline void run_irregularity(Report &r, const Connection &c, const std::vector<std::string> &names, unsigned seed)
{
    require_level_one(c, "irregularity");
    const auto cv = find_cyclic_vector(c, seed);
    const auto op = to_scalar_operator(c, cv.vector);
    const auto np = newton_polygon(op);
    r.add("irregularity", np.irregularity);
    std::string pts, verts, slopes;
    for (const auto &[i, v] : np.points) {
        pts += (pts.empty() ? "" : " ") + std::string("(") + std::to_string(i) + "," + std::to_string(v) + ")";
    }
    for (const auto &[i, v] : np.vertices) {
        verts += (verts.empty() ? "" : " ") + std::string("(") + std::to_string(i) + "," + std::to_string(v) + ")";
    }
    for (const auto &e : np.edges) {
        slopes += (slopes.empty() ? "" : " ") + to_string(e.slope) + "x" + std::to_string(e.length);
    }
    r.add("newton.points", pts);
    r.add("newton.vertices", verts);
    r.add("newton.slopes", slopes.empty() ? std::string("none") : slopes);
    add_series_vector(r, "cyclic_vector", cv.vector, names);
    r.add("operator", to_string(op));
}

inline void run_cyclic(Report &r, const Connection &c, const std::vector<std::string> &names, unsigned seed)
{
    require_level_one(c, "cyclic vector search");
    const auto cv = find_cyclic_vector(c, seed);
    add_series_vector(r, "vector", cv.vector, names);
    for (std::size_t i = 0; i < cv.certificate.rows(); ++i) {
        for (std::size_t j = 0; j < cv.certificate.cols(); ++j) {
            r.add("certificate." + std::to_string(i + 1) + "." + std::to_string(j + 1),
                  to_string(cv.certificate(i, j), names));
        }
    }
    r.add("determinant", to_string(cv.determinant, names));
    r.add("determinant_valuation", cv.determinant.valuation());
    r.add("operator", to_string(to_scalar_operator(c, cv.vector)));
}

inline void run_epsilon(Report &r, const Connection &c, const FormTuple &nu, const TaskSpec &task,
                        const IndexOptions &opt)
{
    const auto eps = epsilon_degree(c, nu, opt);
    r.add("degree", eps.line.degree);
    for (const auto &[name, ir] : eps.reports) {
        std::string key;
        for (char ch : name) {
            key += ch == ' ' ? '_' : ch;
        }
        add_index_report(r, "index." + key, ir);
    }
    if (task.det) {
        const Connection ref = Connection::trivial(c.field, c.rank);
        const auto det = epsilon_det_rel(c, ref, nu, opt);
        r.add("det.reference", "trivial");
        r.add("det.status", to_string(det.status));
        r.add("det.ratio", to_string(det.ratio));
        std::string tr;
        for (const auto &[w, q] : det.trace) {
            tr += (tr.empty() ? "" : " ") + std::to_string(w) + ":" + to_string(q);
        }
        r.add("det.trace", tr);
        r.add("det.normalization", det.normalization);
    }
}

inline void run_verify(Report &r, const Connection &c, const FormTuple &nu, const TaskSpec &task,
                       const IndexOptions &opt)
{
    std::vector<std::string> failed;
    r.add("flat", true);
    r.add("forms", "closed independent");
    const auto mc = check_multicomplex(build_multicomplex(c, nu), opt);
    r.add("multicomplex.squares", mc.squares_ok);
    r.add("multicomplex.acyclic", mc.acyclic);
    if (!mc.squares_ok) {
        failed.push_back("multicomplex squares");
    }
    if (!mc.acyclic) {
        failed.push_back("multicomplex acyclicity"
                         + (mc.acyclicity_failures.empty() ? std::string() : " (" + mc.acyclicity_failures.front() + ")"));
    }
    const bool diagonal = c.level() == 1 || nu.diagonal();
    if (mc.acyclic && diagonal) {
        const auto d = verify_duality(c, nu, task.sigma, opt);
        r.add("duality.sigma", task.sigma);
        r.add("duality.original", d.original);
        r.add("duality.dual", d.dual_side);
        r.add("duality.ok", d.ok);
        if (!d.ok) {
            failed.push_back("duality");
        }
    } else {
        r.add("duality", "skipped");
    }
    if (c.level() == 1) {
        const auto ind = verify_induction(c, KummerCover{task.cover}, nu, opt);
        r.add("induction.cover", task.cover);
        r.add("induction.upstairs", ind.upstairs);
        r.add("induction.downstairs", ind.downstairs);
        r.add("induction.ok", ind.ok);
        if (!ind.ok) {
            failed.push_back("induction");
        }
    } else {
        r.add("induction", "skipped");
    }
    r.add("result", failed.empty() ? "pass" : "fail");
    if (!failed.empty()) {
        r.exit_code = 3;
        std::string msg;
        for (const auto &f : failed) {
            msg += (msg.empty() ? "" : "; ") + f;
        }
        r.diagnostic = "VerificationFailed: " + msg;
    }
}

} // namespace detail

/// Runs the task of `s`. Library errors propagate; see exit_code_for.
inline Report run(const SpecFile &s, const RunOptions &o = {})
{
    const int precision = o.precision ? *o.precision : s.precision.value_or(32);
    if (precision < 1) {
        throw DimensionMismatch("precision must be positive");
    }
    working_precision() = precision;
    const IndexOptions opt = detail::index_options(o);

    Report r;
    r.add("command", s.task.command);
    r.add("n", s.field.level);
    r.add("rank", s.rank);
    r.add("precision", precision);
    r.add("max_window", o.max_window);

    const Connection c = to_connection(s);
    require_flat(c);
    const FormTuple nu = to_forms(s);
    if (s.task.command == "epsilon" || s.task.command == "verify") {
        nu.validate();
    }
    const auto &names = s.field.names;
    if (s.task.command == "cohomology") {
        detail::run_cohomology(r, c, opt);
    } else if (s.task.command == "irregularity") {
        detail::run_irregularity(r, c, names, o.seed);
    } else if (s.task.command == "cyclic") {
        detail::run_cyclic(r, c, names, o.seed);
    } else if (s.task.command == "epsilon") {
        detail::run_epsilon(r, c, nu, s.task, opt);
    } else if (s.task.command == "verify") {
        detail::run_verify(r, c, nu, s.task, opt);
    } else {
        throw UnknownKey("unknown command '" + s.task.command + "'");
    }
    return r;
}

} // namespace drep

#endif
