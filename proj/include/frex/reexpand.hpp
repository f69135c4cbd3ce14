#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frex/conditions.hpp"
#include "frex/funcmodel.hpp"
#include "frex/quad.hpp"
#include "frex/transforms.hpp"

namespace frex {

enum class ReexpandDirection { CosToSin, SinToCos };

const char* to_string(ReexpandDirection d);

// Both sides of one re-expansion identity evaluated over a grid:
//   CosToSin:  Fs(x)  vs  (H_e Fc)(x)
//   SinToCos:  Fc(x)  vs  -(H_o Fs)(x)
// path_direct is the transform computed straight from f; path_hilbert goes
// through the half-line Hilbert transform of the other transform.  The
// absolute-integrability classification of the re-expanded transform is
// reported twice, once per route, and theorem_consistent says whether the two
// classifications agree.
struct ReexpansionReport {
    ReexpandDirection direction = ReexpandDirection::CosToSin;
    std::string function_name;
    Grid grid;
    std::vector<double> path_hilbert;
    std::vector<double> path_direct;
    double max_abs_diff = 0.0;
    double id_tol = 0.0;            // tolerance used for identity_holds
    std::vector<int> flagged_points;  // grid indices where |diff| > id_tol
    bool identity_holds = false;
    TailVerdict l1_verdict;          // classification of int |direct transform|
    std::optional<double> l1_value;  // the integral itself, when convergent
    TailVerdict hilbert_l1_verdict;  // same integral through the Hilbert route
    bool theorem_consistent = false;
};

// 16-point logarithmic grid on [0.1, 10]; what the operations below use when
// the caller does not supply a grid.
Grid default_reexpand_grid();

// Re-expand the cosine transform of `e` into the sine transform via the even
// half-line Hilbert form, and compare with the directly computed sine
// transform.  Precondition: int_0^inf |Fc| must classify as Convergent
// (otherwise PreconditionFailed).  Closed transforms from the catalog entry
// are used when present; otherwise the transforms are computed numerically
// and the looser nested tolerance applies.  A single out-of-tolerance grid
// point is forgiven (flagged, identity still holds) when f declares jumps,
// since a jump makes the identity fragile at isolated points.
ReexpansionReport reexpand_cos_to_sin(const CatalogEntry& e, const Grid& grid,
                                      const QuadConfig& cfg);

// Mirror image: re-expand the sine transform into the cosine transform via
// the odd half-line Hilbert form (with the sign flip).  Precondition:
// int_0^inf |Fs| classifies as Convergent.
ReexpansionReport reexpand_sin_to_cos(const CatalogEntry& e, const Grid& grid,
                                      const QuadConfig& cfg);

enum class HardyVerdict { InH1, NotInH1, Inconclusive };

const char* to_string(HardyVerdict v);

struct HardyReport {
    HardyVerdict verdict = HardyVerdict::Inconclusive;
    double vm_value = 0.0;
    bool vm_pass = false;
    TailVerdict hilbert_l1;  // classification of int |H g|
};

// Numerical stand-in for "g belongs to the real Hardy space H^1(R)":
// integrable g with a vanishing moment and an absolutely integrable Hilbert
// transform.  InH1 when both hold, NotInH1 when either fails cleanly,
// Inconclusive when the tail classifier cannot decide.
HardyReport hardy_space_verdict(const FunctionSpec& g, const QuadConfig& cfg);

}  // namespace frex
