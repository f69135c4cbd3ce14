// Command-line front end: catalog inspection, transforms, Hilbert transforms,
// condition checks, re-expansions and convergence studies, reported as JSON
// on stdout (12 significant digits) with optional CSV via --out.
//
// Exit codes: 0 success, 1 computation failure, 2 usage error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frex/errors.hpp"
#include "frex/grid_eval.hpp"
#include "frex/reports.hpp"

namespace {

using frex::QuadConfig;

// "key = value" per line, '#' comments.  Keys mirror the QuadConfig fields.
QuadConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    QuadConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string key, eq, value;
        std::istringstream ls(line);
        if (!(ls >> key)) continue;  // blank
        if (!(ls >> eq >> value) || eq != "=") {
            std::ostringstream msg;
            msg << path << ":" << lineno << ": expected 'key = value'";
            throw std::invalid_argument(msg.str());
        }
        try {
            if (key == "rel_tol")
                cfg.rel_tol = std::stod(value);
            else if (key == "abs_tol")
                cfg.abs_tol = std::stod(value);
            else if (key == "max_subdiv")
                cfg.max_subdiv = std::stoi(value);
            else if (key == "pv_excision")
                cfg.pv_excision = std::stod(value);
            else if (key == "tail_start")
                cfg.tail_start = std::stod(value);
            else if (key == "tail_blocks")
                cfg.tail_blocks = std::stoi(value);
            else if (key == "divergence_window")
                cfg.divergence_window = std::stoi(value);
            else {
                std::ostringstream msg;
                msg << path << ":" << lineno << ": unknown key '" << key << "'";
                throw std::invalid_argument(msg.str());
            }
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception&) {
            std::ostringstream msg;
            msg << path << ":" << lineno << ": bad value '" << value << "'";
            throw std::invalid_argument(msg.str());
        }
    }
    return cfg;
}

const frex::CatalogEntry& entry_or_die(const std::string& name) {
    const auto* e = frex::find_entry(name);
    if (!e) {
        std::ostringstream msg;
        msg << "unknown function '" << name << "'; try 'catalog list'";
        throw std::invalid_argument(msg.str());
    }
    return *e;
}

std::vector<double> parse_number_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::string tok;
    std::istringstream in(text);
    while (std::getline(in, tok, ',')) {
        std::size_t pos = 0;
        double v = std::numeric_limits<double>::quiet_NaN();
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != tok.size() || !std::isfinite(v)) {
            std::ostringstream msg;
            msg << "bad " << what << " element '" << tok << "'";
            throw std::invalid_argument(msg.str());
        }
        out.push_back(v);
    }
    if (out.empty()) {
        std::ostringstream msg;
        msg << what << " list is empty";
        throw std::invalid_argument(msg.str());
    }
    return out;
}

void emit(const frex::json& doc, const std::string& out_path,
          const std::function<void(std::ostream&)>& csv_writer) {
    std::cout << doc.dump(2) << "\n";
    if (!out_path.empty()) {
        std::ofstream os(out_path);
        if (!os) throw std::runtime_error("cannot open output file '" + out_path + "'");
        if (csv_writer) csv_writer(os);
        if (!os) throw std::runtime_error("failed writing output file '" + out_path + "'");
    }
}

frex::PointResult as_point(double x, const frex::EvalResult& r) {
    frex::PointResult p;
    p.x = x;
    p.value = r.value;
    p.err = r.err_estimate;
    p.converged = r.converged;
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Half-line Fourier transforms, Hilbert transforms and their "
                 "re-expansion identities"};
    app.require_subcommand(1);

    // Global knobs; flags beat the config file, which beats the defaults.
    std::string config_path, out_path;
    double rel_tol = 0, abs_tol = 0, pv_excision = 0, tail_start = 0;
    int max_subdiv = 0, tail_blocks = 0, divergence_window = 0, threads = 0;
    app.add_option("--config", config_path, "configuration file (key = value lines)");
    app.add_option("--out", out_path, "also write the report as CSV to this path");
    auto* o_rel = app.add_option("--rel-tol", rel_tol, "relative tolerance");
    auto* o_abs = app.add_option("--abs-tol", abs_tol, "absolute tolerance");
    auto* o_sub = app.add_option("--max-subdiv", max_subdiv, "adaptive bisection budget");
    auto* o_pv = app.add_option("--pv-excision", pv_excision,
                                "base excision half-width for principal values");
    auto* o_ts = app.add_option("--tail-start", tail_start, "where dyadic tail blocks begin");
    auto* o_tb = app.add_option("--tail-blocks", tail_blocks, "number of dyadic tail blocks");
    auto* o_dw = app.add_option("--divergence-window", divergence_window,
                                "trailing blocks used by the divergence fit");
    app.add_option("--threads", threads, "cap the parallel grid evaluator's threads");

    // catalog list | show <name>
    auto* cat = app.add_subcommand("catalog", "inspect the built-in function table");
    cat->require_subcommand(1);
    auto* cat_list = cat->add_subcommand("list", "list all catalog functions");
    auto* cat_show = cat->add_subcommand("show", "show one catalog function");
    std::string show_name;
    cat_show->add_option("name", show_name, "function name")->required();

    // transform
    auto* tr = app.add_subcommand("transform", "half-line cosine or sine transform");
    std::string tr_kind, tr_fn, tr_grid;
    double tr_at = 0;
    tr->add_option("--kind", tr_kind, "cos or sin")
        ->required()
        ->check(CLI::IsMember({"cos", "sin"}));
    tr->add_option("--function", tr_fn, "catalog function name")->required();
    auto* tr_at_opt = tr->add_option("--at", tr_at, "single evaluation point");
    auto* tr_grid_opt =
        tr->add_option("--grid", tr_grid, "grid spec: lin:a:b:n | log:a:b:n | at:x1,x2,...");
    tr_at_opt->excludes(tr_grid_opt);

    // hilbert
    auto* hi = app.add_subcommand("hilbert", "Hilbert transform in one of four forms");
    std::string hi_form, hi_fn, hi_grid;
    hi->add_option("--form", hi_form, "full | odd | even | even-cancelled")
        ->required()
        ->check(CLI::IsMember({"full", "odd", "even", "even-cancelled"}));
    hi->add_option("--function", hi_fn, "catalog function name")->required();
    hi->add_option("--grid", hi_grid, "grid spec")->required();

    // check
    auto* ch = app.add_subcommand("check", "integrability condition checks");
    std::string ch_fn, ch_conditions = "vm,logc,local,llogl", ch_q = "2,inf";
    ch->add_option("--function", ch_fn, "catalog function name")->required();
    ch->add_option("--conditions", ch_conditions,
                   "comma list from vm,logc,local,llogl,aq (default: all but aq)");
    auto* ch_q_opt =
        ch->add_option("--q", ch_q, "amalgam exponents, e.g. 2,inf (implies aq)");

    // reexpand
    auto* re = app.add_subcommand("reexpand",
                                  "re-expand one transform into the other and compare");
    std::string re_from, re_fn, re_grid;
    re->add_option("--from", re_from, "source transform: cos or sin")
        ->required()
        ->check(CLI::IsMember({"cos", "sin"}));
    re->add_option("--function", re_fn, "catalog function name")->required();
    re->add_option("--grid", re_grid, "grid spec (default log:0.1:10:16)");

    // converge
    auto* cv = app.add_subcommand(
        "converge", "regularized Hilbert means of the cosine transform vs N");
    std::string cv_fn, cv_N;
    double cv_at = 0;
    cv->add_option("--function", cv_fn, "catalog function name")->required();
    cv->add_option("--at", cv_at, "evaluation point")->required();
    cv->add_option("--N", cv_N, "comma list of regularization parameters")->required();

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 2;
        }

        QuadConfig cfg;
        if (!config_path.empty()) cfg = load_config_file(config_path);
        if (o_rel->count()) cfg.rel_tol = rel_tol;
        if (o_abs->count()) cfg.abs_tol = abs_tol;
        if (o_sub->count()) cfg.max_subdiv = max_subdiv;
        if (o_pv->count()) cfg.pv_excision = pv_excision;
        if (o_ts->count()) cfg.tail_start = tail_start;
        if (o_tb->count()) cfg.tail_blocks = tail_blocks;
        if (o_dw->count()) cfg.divergence_window = divergence_window;
        cfg.validate();
        frex::set_threads(threads);

        if (cat_list->parsed()) {
            const auto doc = frex::catalog_list_json();
            emit(doc, out_path, [](std::ostream& os) {
                os << "name,domain,parity,has_Fc_closed,has_Fs_closed\n";
                for (const auto& e : frex::catalog())
                    os << e.name << ',' << to_string(e.f.domain) << ','
                       << to_string(e.f.parity) << ',' << (e.Fc_closed ? 1 : 0) << ','
                       << (e.Fs_closed ? 1 : 0) << "\n";
            });
            return 0;
        }
        if (cat_show->parsed()) {
            const auto& e = entry_or_die(show_name);
            emit(frex::catalog_show_json(e), out_path, [&e](std::ostream& os) {
                os << "name,domain,parity,has_Fc_closed,has_Fs_closed\n"
                   << e.name << ',' << to_string(e.f.domain) << ','
                   << to_string(e.f.parity) << ',' << (e.Fc_closed ? 1 : 0) << ','
                   << (e.Fs_closed ? 1 : 0) << "\n";
            });
            return 0;
        }

        if (tr->parsed()) {
            const auto& e = entry_or_die(tr_fn);
            if (tr_at_opt->count() == 0 && tr_grid_opt->count() == 0)
                throw std::invalid_argument("transform: need --at or --grid");
            std::vector<double> xs;
            frex::GridKind gk = frex::GridKind::Explicit;
            if (tr_grid_opt->count()) {
                auto g = frex::Grid::parse(tr_grid);
                xs = g.points;
                gk = g.kind;
            } else {
                xs = {tr_at};
            }
            (void)gk;
            frex::TransformRun run;
            run.kind = tr_kind;
            run.function_name = e.name;
            const bool cos = tr_kind == "cos";
            for (double x : xs) {
                const auto r = cos ? frex::cosine_transform(e.f, x, cfg)
                                   : frex::sine_transform(e.f, x, cfg);
                run.points.push_back(as_point(x, r));
            }
            emit(to_json(run), out_path,
                 [&run](std::ostream& os) { write_csv(run, os); });
            return 0;
        }

        if (hi->parsed()) {
            const auto& e = entry_or_die(hi_fn);
            const auto g = frex::Grid::parse(hi_grid);
            frex::HilbertForm form = frex::HilbertForm::FullLine;
            if (hi_form == "odd")
                form = frex::HilbertForm::OddHalfLine;
            else if (hi_form == "even")
                form = frex::HilbertForm::EvenHalfLine;
            else if (hi_form == "even-cancelled")
                form = frex::HilbertForm::EvenHalfLineCancelled;
            frex::HilbertRun run;
            run.form = hi_form;
            run.function_name = e.name;
            for (double x : g.points)
                run.points.push_back(as_point(x, frex::hilbert(e.f, x, form, cfg)));
            emit(to_json(run), out_path,
                 [&run](std::ostream& os) { write_csv(run, os); });
            return 0;
        }

        if (ch->parsed()) {
            const auto& e = entry_or_die(ch_fn);
            frex::ConditionSelection sel;
            sel.vm = sel.logc = sel.local = sel.llogl = false;
            bool want_aq = ch_q_opt->count() > 0;
            std::string tok;
            std::istringstream cs(ch_conditions);
            while (std::getline(cs, tok, ',')) {
                if (tok == "vm")
                    sel.vm = true;
                else if (tok == "logc")
                    sel.logc = true;
                else if (tok == "local")
                    sel.local = true;
                else if (tok == "llogl")
                    sel.llogl = true;
                else if (tok == "aq")
                    want_aq = true;
                else
                    throw std::invalid_argument("unknown condition '" + tok + "'");
            }
            if (want_aq) {
                std::string qt;
                std::istringstream qs(ch_q);
                while (std::getline(qs, qt, ',')) {
                    if (qt == "inf")
                        sel.aq_qs.push_back(std::numeric_limits<double>::infinity());
                    else {
                        std::size_t pos = 0;
                        double q = 0;
                        try {
                            q = std::stod(qt, &pos);
                        } catch (const std::exception&) {
                            pos = 0;
                        }
                        if (pos != qt.size())
                            throw std::invalid_argument("bad q '" + qt + "'");
                        sel.aq_qs.push_back(q);
                    }
                }
            }
            frex::CheckRun run;
            run.function_name = e.name;
            run.report = frex::build_condition_report(e.f, sel, cfg);
            emit(to_json(run), out_path,
                 [&run](std::ostream& os) { write_csv(run, os); });
            return 0;
        }

        if (re->parsed()) {
            const auto& e = entry_or_die(re_fn);
            const auto grid = re_grid.empty() ? frex::default_reexpand_grid()
                                              : frex::Grid::parse(re_grid);
            const auto rep = re_from == "cos"
                                 ? frex::reexpand_cos_to_sin(e, grid, cfg)
                                 : frex::reexpand_sin_to_cos(e, grid, cfg);
            emit(to_json(rep), out_path,
                 [&rep](std::ostream& os) { write_csv(rep, os); });
            return 0;
        }

        if (cv->parsed()) {
            const auto& e = entry_or_die(cv_fn);
            const auto Ns = parse_number_list(cv_N, "--N");
            for (double N : Ns)
                if (!(N > 0))
                    throw std::invalid_argument("--N entries must be positive");
            if (!e.Fc_closed && !e.f.eval)
                throw std::invalid_argument("function has no evaluable transform");

            // The study follows the cosine transform: its even extension is
            // the function whose Hilbert transform the means approach.
            frex::FunctionSpec Fc;
            if (e.Fc_closed) {
                Fc = *e.Fc_closed;
            } else {
                Fc.domain = frex::Domain::HalfLine;
                Fc.parity = frex::Parity::Even;
                const auto f = e.f;
                const auto c2 = cfg;
                Fc.eval = [f, c2](double x) {
                    return frex::cosine_transform(f, x, c2).value;
                };
            }
            const auto g = frex::extend(Fc, frex::Parity::Even);

            double reference = 0.0;
            if (e.HFc_closed && cv_at >= 0.0)
                reference = e.HFc_closed->eval(cv_at);
            else
                reference = frex::hilbert(g, cv_at, frex::HilbertForm::FullLine, cfg).value;

            frex::ConvergeStudy study;
            study.function_name = e.name;
            study.x = cv_at;
            study.reference = reference;
            for (double N : Ns) {
                const auto m = frex::cesaro_hilbert_mean(g, cv_at, N, cfg);
                frex::ConvergeRow row;
                row.N = N;
                row.mean = m.value;
                row.abs_err = std::fabs(m.value - reference);
                study.rows.push_back(row);
            }
            emit(to_json(study), out_path,
                 [&study](std::ostream& os) { write_csv(study, os); });
            return 0;
        }

        throw std::invalid_argument("no subcommand given");
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
