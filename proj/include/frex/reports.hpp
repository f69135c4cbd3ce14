#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "frex/conditions.hpp"
#include "frex/funcmodel.hpp"
#include "frex/quad.hpp"
#include "frex/reexpand.hpp"
#include "frex/transforms.hpp"

namespace frex {

using json = nlohmann::ordered_json;

// All numbers leaving the library go through this: round to 12 significant
// digits so that repeated runs (and JSON/CSV round trips) are byte-identical.
double round_sig(double v, int digits = 12);
std::string format_sig(double v, int digits = 12);

// A transform or Hilbert evaluation over a grid, as emitted by the CLI.
struct PointResult {
    double x = 0.0;
    double value = 0.0;
    double err = 0.0;
    bool converged = false;
};

struct TransformRun {
    std::string kind;          // "cos" | "sin"
    std::string function_name;
    std::vector<PointResult> points;
};

struct HilbertRun {
    std::string form;          // "full" | "odd" | "even" | "even-cancelled"
    std::string function_name;
    std::vector<PointResult> points;
};

struct ConvergeRow {
    double N = 0.0;
    double mean = 0.0;
    double abs_err = 0.0;      // |mean - reference|
};

struct ConvergeStudy {
    std::string function_name;
    double x = 0.0;
    double reference = 0.0;    // limit the means are compared against
    std::vector<ConvergeRow> rows;
};

struct CheckRun {
    std::string function_name;
    ConditionReport report;
};

// JSON, with stable key order and 12-significant-digit numerics.
json to_json(const TailVerdict& v);
json to_json(const CondValue& v);
json to_json(const ConditionReport& r);
json to_json(const CheckRun& r);
json to_json(const TransformRun& r);
json to_json(const HilbertRun& r);
json to_json(const ConvergeStudy& s);
json to_json(const ReexpansionReport& r);
json to_json(const Grid& g);
json catalog_list_json();
json catalog_show_json(const CatalogEntry& e);

// Inverse mappings; each emitted report re-parses into its originating type.
// Throws std::invalid_argument on a structurally wrong document.
TailVerdict tail_verdict_from_json(const json& j);
CondValue cond_value_from_json(const json& j);
ConditionReport condition_report_from_json(const json& j);
CheckRun check_run_from_json(const json& j);
TransformRun transform_run_from_json(const json& j);
HilbertRun hilbert_run_from_json(const json& j);
ConvergeStudy converge_study_from_json(const json& j);
ReexpansionReport reexpansion_report_from_json(const json& j);
Grid grid_from_json(const json& j);

// CSV: header row first, LF line endings, %.12g numbers.
void write_csv(const TransformRun& r, std::ostream& os);
void write_csv(const HilbertRun& r, std::ostream& os);
void write_csv(const ConvergeStudy& s, std::ostream& os);
void write_csv(const ReexpansionReport& r, std::ostream& os);
void write_csv(const CheckRun& r, std::ostream& os);

}  // namespace frex
