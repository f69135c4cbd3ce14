#include "frex/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace frex {

double round_sig(double v, int digits) {
    if (v == 0.0) return 0.0;  // normalizes -0 as well
    if (!std::isfinite(v)) return v;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return std::strtod(buf, nullptr);
}

std::string format_sig(double v, int digits) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

namespace {

json num(double v) { return json(round_sig(v)); }

json num_array(const std::vector<double>& vs) {
    json a = json::array();
    for (double v : vs) a.push_back(num(v));
    return a;
}

TailKind tail_kind_from_string(const std::string& s) {
    if (s == "convergent") return TailKind::Convergent;
    if (s == "divergent_logarithmic") return TailKind::DivergentLogarithmic;
    if (s == "divergent_polynomial") return TailKind::DivergentPolynomial;
    if (s == "inconclusive") return TailKind::Inconclusive;
    throw std::invalid_argument("unknown tail kind '" + s + "'");
}

CondKind cond_kind_from_string(const std::string& s) {
    if (s == "finite") return CondKind::Finite;
    if (s == "divergent") return CondKind::Divergent;
    if (s == "inconclusive") return CondKind::Inconclusive;
    throw std::invalid_argument("unknown condition kind '" + s + "'");
}

std::string q_key(double q) {
    return std::isinf(q) ? "inf" : format_sig(q);
}

double q_from_key(const std::string& key) {
    if (key == "inf") return std::numeric_limits<double>::infinity();
    return std::strtod(key.c_str(), nullptr);
}

json points_json(const std::vector<PointResult>& pts) {
    json a = json::array();
    for (const auto& p : pts) {
        json e;
        e["x"] = num(p.x);
        e["value"] = num(p.value);
        e["err"] = num(p.err);
        e["converged"] = p.converged;
        a.push_back(std::move(e));
    }
    return a;
}

std::vector<PointResult> points_from_json(const json& a) {
    std::vector<PointResult> pts;
    for (const auto& e : a) {
        PointResult p;
        p.x = e.at("x").get<double>();
        p.value = e.at("value").get<double>();
        p.err = e.at("err").get<double>();
        p.converged = e.at("converged").get<bool>();
        pts.push_back(p);
    }
    return pts;
}

// CSV cells: %.12g numbers, booleans as 0/1, LF endings.
void csv_row(std::ostream& os, std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
        if (!first) os << ',';
        os << c;
        first = false;
    }
    os << '\n';
}

template <typename T>
[[noreturn]] void structural_error(const T& e) {
    throw std::invalid_argument(std::string("malformed report document: ") + e.what());
}

}  // namespace

json to_json(const TailVerdict& v) {
    json j;
    j["kind"] = to_string(v.kind);
    j["model"] = to_string(v.model);
    j["fitted_rate"] = num(v.fitted_rate);
    j["residual"] = num(v.residual);
    return j;
}

TailVerdict tail_verdict_from_json(const json& j) {
    try {
        TailVerdict v;
        v.kind = tail_kind_from_string(j.at("kind").get<std::string>());
        const auto model = j.at("model").get<std::string>();
        if (model == "constant")
            v.model = TailModel::Constant;
        else if (model == "harmonic")
            v.model = TailModel::Harmonic;
        else if (model == "geometric")
            v.model = TailModel::Geometric;
        else
            throw std::invalid_argument("malformed report document: tail model '" +
                                        model + "'");
        v.fitted_rate = j.at("fitted_rate").get<double>();
        v.residual = j.at("residual").get<double>();
        return v;
    } catch (const json::exception& e) {
        structural_error(e);
    }
}

json to_json(const CondValue& v) {
    json j;
    j["kind"] = to_string(v.kind);
    if (v.kind == CondKind::Finite) j["value"] = num(v.value);
    j["tail"] = to_json(v.tail);
    if (v.bad_x) j["bad_x"] = num(*v.bad_x);
    return j;
}

CondValue cond_value_from_json(const json& j) {
    try {
        CondValue v;
        v.kind = cond_kind_from_string(j.at("kind").get<std::string>());
        if (j.contains("value")) v.value = j.at("value").get<double>();
        v.tail = tail_verdict_from_json(j.at("tail"));
        if (j.contains("bad_x")) v.bad_x = j.at("bad_x").get<double>();
        return v;
    } catch (const json::exception& e) {
        structural_error(e);
    }
}

json to_json(const ConditionReport& r) {
    json j;
    if (r.vm_value) j["vm_value"] = num(*r.vm_value);
    if (r.vm_pass) j["vm_pass"] = *r.vm_pass;
    if (r.logc) j["logc"] = to_json(*r.logc);
    if (r.local) j["local"] = to_json(*r.local);
    if (r.llogl) j["llogl"] = to_json(*r.llogl);
    if (!r.aq.empty()) {
        json a;
        for (const auto& [q, v] : r.aq) a[q_key(q)] = to_json(v);
        j["aq"] = std::move(a);
    }
    if (r.h1_plausible) j["h1_plausible"] = *r.h1_plausible;
    return j;
}

ConditionReport condition_report_from_json(const json& j) {
    try {
        ConditionReport r;
        if (j.contains("vm_value")) r.vm_value = j.at("vm_value").get<double>();
        if (j.contains("vm_pass")) r.vm_pass = j.at("vm_pass").get<bool>();
        if (j.contains("logc")) r.logc = cond_value_from_json(j.at("logc"));
        if (j.contains("local")) r.local = cond_value_from_json(j.at("local"));
        if (j.contains("llogl")) r.llogl = cond_value_from_json(j.at("llogl"));
        if (j.contains("aq"))
            for (const auto& [key, v] : j.at("aq").items())
                r.aq[q_from_key(key)] = cond_value_from_json(v);
        if (j.contains("h1_plausible"))
            r.h1_plausible = j.at("h1_plausible").get<bool>();
        return r;
    } catch (const json::exception& e) {
        structural_error(e);
    }
}

json to_json(const CheckRun& r) {
    json j;
    j["command"] = "check";
    j["function"] = r.function_name;
    j["report"] = to_json(r.report);
    return j;
}

CheckRun check_run_from_json(const json& j) {
    try {
        CheckRun r;
        r.function_name = j.at("function").get<std::string>();
        r.report = condition_report_from_json(j.at("report"));
        return r;
    } catch (const json::exception& e) {
        structural_error(e);
    }
}

json to_json(const TransformRun& r) {
    json j;
    j["command"] = "transform";
    j["kind"] = r.kind;
    j["function"] = r.function_name;
    j["points"] = points_json(r.points);
    return j;
}

TransformRun transform_run_from_json(const json& j) {
    try {
        TransformRun r;
        r.kind = j.at("kind").get<std::string>();
        r.function_name = j.at("function").get<std::string>();
        r.points = points_from_json(j.at("points"));
        return r;
    } catch (const json::exception& e) {
        structural_error(e);
    }
}

json to_json(const HilbertRun& r) {
    json j;
    j["command"] = "hilbert";
    j["form"] = r.form;
    j["function"] = r.function_name;
    j["points"] = points_json(r.points);
    return j;
}

HilbertRun hilbert_run_from_json(const json& j) {
    try {
        HilbertRun r;
        r.form = j.at("form").get<std::string>();
        r.function_name = j.at("function").get<std::string>();
        r.points = points_from_json(j.at("points"));
        return r;
    } catch (const json::exception& e) {
        structural_error(e);
    }
}

json to_json(const ConvergeStudy& s) {
    json j;
    j["command"] = "converge";
    j["function"] = s.function_name;
    j["x"] = num(s.x);
    j["reference"] = num(s.reference);
    json rows = json::array();
    for (const auto& r : s.rows) {
        json e;
        e["N"] = num(r.N);
        e["mean"] = num(r.mean);
        e["abs_err"] = num(r.abs_err);
        rows.push_back(std::move(e));
    }
    j["rows"] = std::move(rows);
    return j;
}

ConvergeStudy converge_study_from_json(const json& j) {
    try {
        ConvergeStudy s;
        s.function_name = j.at("function").get<std::string>();
        s.x = j.at("x").get<double>();
        s.reference = j.at("reference").get<double>();
        for (const auto& e : j.at("rows")) {
            ConvergeRow r;
            r.N = e.at("N").get<double>();
            r.mean = e.at("mean").get<double>();
            r.abs_err = e.at("abs_err").get<double>();
            s.rows.push_back(r);
        }
        return s;
    } catch (const json::exception& e) {
        structural_error(e);
    }
}

json to_json(const Grid& g) {
    json j;
    j["kind"] = to_string(g.kind);
    j["points"] = num_array(g.points);
    return j;
}

Grid grid_from_json(const json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        std::vector<double> pts;
        for (const auto& p : j.at("points")) pts.push_back(p.get<double>());
        Grid g = Grid::explicit_points(std::move(pts));
        if (kind == "uniform")
            g.kind = GridKind::Uniform;
        else if (kind == "logarithmic")
            g.kind = GridKind::Logarithmic;
        else if (kind == "explicit")
            g.kind = GridKind::Explicit;
        else
            throw std::invalid_argument("unknown grid kind '" + kind + "'");
        return g;
    } catch (const json::exception& e) {
        structural_error(e);
    }
}

json to_json(const ReexpansionReport& r) {
    json j;
    j["command"] = "reexpand";
    j["direction"] = to_string(r.direction);
    j["function"] = r.function_name;
    j["grid"] = to_json(r.grid);
    j["path_hilbert"] = num_array(r.path_hilbert);
    j["path_direct"] = num_array(r.path_direct);
    j["max_abs_diff"] = num(r.max_abs_diff);
    j["id_tol"] = num(r.id_tol);
    j["flagged_points"] = r.flagged_points;
    j["identity_holds"] = r.identity_holds;
    j["l1_verdict"] = to_json(r.l1_verdict);
    j["l1_value"] = r.l1_value ? json(round_sig(*r.l1_value)) : json(nullptr);
    j["hilbert_l1_verdict"] = to_json(r.hilbert_l1_verdict);
    j["theorem_consistent"] = r.theorem_consistent;
    return j;
}

ReexpansionReport reexpansion_report_from_json(const json& j) {
    try {
        ReexpansionReport r;
        const std::string dir = j.at("direction").get<std::string>();
        if (dir == "cos_to_sin")
            r.direction = ReexpandDirection::CosToSin;
        else if (dir == "sin_to_cos")
            r.direction = ReexpandDirection::SinToCos;
        else
            throw std::invalid_argument("unknown direction '" + dir + "'");
        r.function_name = j.at("function").get<std::string>();
        r.grid = grid_from_json(j.at("grid"));
        for (const auto& v : j.at("path_hilbert")) r.path_hilbert.push_back(v.get<double>());
        for (const auto& v : j.at("path_direct")) r.path_direct.push_back(v.get<double>());
        r.max_abs_diff = j.at("max_abs_diff").get<double>();
        r.id_tol = j.at("id_tol").get<double>();
        for (const auto& v : j.at("flagged_points")) r.flagged_points.push_back(v.get<int>());
        r.identity_holds = j.at("identity_holds").get<bool>();
        r.l1_verdict = tail_verdict_from_json(j.at("l1_verdict"));
        if (!j.at("l1_value").is_null()) r.l1_value = j.at("l1_value").get<double>();
        r.hilbert_l1_verdict = tail_verdict_from_json(j.at("hilbert_l1_verdict"));
        r.theorem_consistent = j.at("theorem_consistent").get<bool>();
        return r;
    } catch (const json::exception& e) {
        structural_error(e);
    }
}

json catalog_list_json() {
    json j;
    j["command"] = "catalog-list";
    json fns = json::array();
    for (const auto& e : catalog()) {
        json f;
        f["name"] = e.name;
        f["domain"] = to_string(e.f.domain);
        f["parity"] = to_string(e.f.parity);
        f["has_Fc_closed"] = e.Fc_closed.has_value();
        f["has_Fs_closed"] = e.Fs_closed.has_value();
        f["has_HFc_closed"] = e.HFc_closed.has_value();
        f["Fc_integrable"] = e.Fc_integrable ? json(*e.Fc_integrable) : json(nullptr);
        f["Fs_integrable"] = e.Fs_integrable ? json(*e.Fs_integrable) : json(nullptr);
        fns.push_back(std::move(f));
    }
    j["functions"] = std::move(fns);
    return j;
}

json catalog_show_json(const CatalogEntry& e) {
    json j;
    j["command"] = "catalog-show";
    json f;
    f["name"] = e.name;
    f["notes"] = e.notes;
    f["domain"] = to_string(e.f.domain);
    f["parity"] = to_string(e.f.parity);
    f["decay_exponent"] =
        e.f.decay_exponent ? json(round_sig(*e.f.decay_exponent)) : json(nullptr);
    f["jumps"] = num_array(e.f.jumps);
    f["has_Fc_closed"] = e.Fc_closed.has_value();
    f["has_Fs_closed"] = e.Fs_closed.has_value();
    f["has_HFc_closed"] = e.HFc_closed.has_value();
    f["Fc_integrable"] = e.Fc_integrable ? json(*e.Fc_integrable) : json(nullptr);
    f["Fs_integrable"] = e.Fs_integrable ? json(*e.Fs_integrable) : json(nullptr);
    j["function"] = std::move(f);
    return j;
}

void write_csv(const TransformRun& r, std::ostream& os) {
    csv_row(os, {"x", "value", "err", "converged"});
    for (const auto& p : r.points)
        csv_row(os, {format_sig(p.x), format_sig(p.value), format_sig(p.err),
                     p.converged ? "1" : "0"});
}

void write_csv(const HilbertRun& r, std::ostream& os) {
    csv_row(os, {"x", "value", "err", "converged"});
    for (const auto& p : r.points)
        csv_row(os, {format_sig(p.x), format_sig(p.value), format_sig(p.err),
                     p.converged ? "1" : "0"});
}

void write_csv(const ConvergeStudy& s, std::ostream& os) {
    csv_row(os, {"N", "mean", "abs_err"});
    for (const auto& r : s.rows)
        csv_row(os, {format_sig(r.N), format_sig(r.mean), format_sig(r.abs_err)});
}

void write_csv(const ReexpansionReport& r, std::ostream& os) {
    csv_row(os, {"x", "path_hilbert", "path_direct", "abs_diff", "flagged"});
    for (std::size_t i = 0; i < r.grid.points.size(); ++i) {
        const bool flagged =
            std::find(r.flagged_points.begin(), r.flagged_points.end(),
                      static_cast<int>(i)) != r.flagged_points.end();
        csv_row(os, {format_sig(r.grid.points[i]), format_sig(r.path_hilbert[i]),
                     format_sig(r.path_direct[i]),
                     format_sig(std::fabs(r.path_hilbert[i] - r.path_direct[i])),
                     flagged ? "1" : "0"});
    }
}

void write_csv(const CheckRun& r, std::ostream& os) {
    csv_row(os, {"condition", "kind", "value"});
    const auto& rep = r.report;
    if (rep.vm_value)
        csv_row(os, {"vm", *rep.vm_pass ? "pass" : "fail", format_sig(*rep.vm_value)});
    auto cond_row = [&](const std::string& name, const CondValue& v) {
        csv_row(os, {name, to_string(v.kind),
                     v.kind == CondKind::Finite ? format_sig(v.value) : ""});
    };
    if (rep.logc) cond_row("logc", *rep.logc);
    if (rep.local) cond_row("local", *rep.local);
    if (rep.llogl) cond_row("llogl", *rep.llogl);
    for (const auto& [q, v] : rep.aq) cond_row("aq_" + q_key(q), v);
    if (rep.h1_plausible)
        csv_row(os, {"h1_plausible", *rep.h1_plausible ? "true" : "false", ""});
}

}  // namespace frex
