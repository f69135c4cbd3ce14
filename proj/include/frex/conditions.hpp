#pragma once

#include <map>
#include <optional>
#include <string>

#include "frex/funcmodel.hpp"
#include "frex/quad.hpp"

namespace frex {

enum class CondKind { Finite, Divergent, Inconclusive };

const char* to_string(CondKind k);

// Outcome of one integral-shaped condition check.  `value` is meaningful when
// kind == Finite; `tail` records the classification that produced a
// Divergent/Inconclusive verdict; `bad_x` marks the offending point when an
// inner (pointwise) integral diverged rather than the outer one.
struct CondValue {
    CondKind kind = CondKind::Inconclusive;
    double value = 0.0;
    TailVerdict tail;
    std::optional<double> bad_x;
};

// Everything the checkers can say about one function.  Fields are optional
// because the caller picks which conditions to run.
struct ConditionReport {
    std::optional<double> vm_value;
    std::optional<bool> vm_pass;
    std::optional<CondValue> logc;    // log-weighted integrability of the far part
    std::optional<CondValue> local;   // integrated local smoothness modulus
    std::optional<CondValue> llogl;   // |g| log+ |g| integrability
    std::map<double, CondValue> aq;   // amalgam norms, keyed by q (inf allowed)
    std::optional<bool> h1_plausible; // vm passed and every computed check finite
};

// Vanishing first moment.  Odd functions pass with value exactly 0 and no
// quadrature; even or untagged functions integrate g over the half line
// (respectively fold the full line).  Pass means |value| <= kMomentTol.
// Throws NotIntegrable when the |g| scan diverges.
std::pair<double, bool> check_vanishing_moment(const FunctionSpec& g,
                                               const QuadConfig& cfg);

// integral_{|x| >= 1/2} |g(x)| log(3|x|) dx, full-line (half-line specs are
// folded through their parity).  Finite iff the far part of g is integrable
// against a logarithmic weight.
CondValue check_log_weight(const FunctionSpec& g, const QuadConfig& cfg);

// Double integral of |g(x+t) - g(x)| / |t| over |t| <= (1/2) min(|x|, 1),
// x in R.  Each slice is probed at offsets 1e-3, 1e-6, 1e-9 first: a
// difference quotient that keeps growing like 1/|t| marks the slice as
// divergent and the verdict carries that x in `bad_x`.
CondValue check_local_smoothness(const FunctionSpec& g, const QuadConfig& cfg);

// integral |g| log+ |g| over the function's own domain (half-line specs are
// not reflected: the mass of a half-line function lives on [0, inf)).
CondValue check_zygmund_llogl(const FunctionSpec& g, const QuadConfig& cfg);

// Amalgam norm  A_q(g) = integral_0^inf phi_q(u) du  with
//   q finite:  phi(u) = ( (1/u) integral_u^{2u} |g|^q )^{1/q}
//   q = inf:   phi(u) = sup_{[u, 2u]} |g|   (64-point sampling per window,
//              hence a lower bound -- the honest direction for divergence)
// The outer integral starts at u = 1e-6; the neglected head is at most
// 1e-6 * sup |g| near 0, far below the scan tolerance for bounded g.
// Throws InvalidQ for q <= 1; q = inf is passed as
// std::numeric_limits<double>::infinity().
CondValue aq_norm(const FunctionSpec& g, double q, const QuadConfig& cfg);

// One truncation estimate: lhs is the computed left-hand side, bound the
// sharp constant times ||g||_1, ratio = lhs / ||g||_1.
struct TruncationBound {
    double lhs = 0.0;
    double ratio = 0.0;
    double bound = 0.0;   // the sharp constant itself (ln 3, 2/3, 1/6)
    bool pass = false;    // ratio <= constant + 1e-3
};

// Evaluate the three truncation estimates for an integrable half-line g:
//   far:  L1 norm in x of  integral_{3x/2}^inf g(t)/(x-t) dt   (<= ln 3 ||g||_1)
//   near: L1 norm in x of  integral_0^{x/2} t g(t)/(x^2-t^2) dt (<= 2/3 ||g||_1)
//   canc: L1 norm in x of  integral_0^{x/2} t^2 g(t)/(x (x^2-t^2)) dt
//                                                              (<= 1/6 ||g||_1)
// "canc" needs even parity and a vanishing half-line moment; when g does not
// qualify it is simply omitted from the map, unless require_canc is set, in
// which case CancellationPreconditionFailed (or ParityMismatch) is thrown.
std::map<std::string, TruncationBound> verify_truncation_constants(
    const FunctionSpec& g, const QuadConfig& cfg, bool require_canc = false);

// Which checks build_condition_report should run.
struct ConditionSelection {
    bool vm = true;
    bool logc = true;
    bool local = true;
    bool llogl = true;
    std::vector<double> aq_qs;  // empty = skip amalgams
};

// Run the selected checkers and fold the results into one report.
// h1_plausible is filled only when vm is selected: it is the conjunction of
// vm_pass with "finite" verdicts for every other condition that was actually
// computed.  The conditions are sufficient only, so a false value never
// proves non-membership (except through a failed moment, which is necessary).
ConditionReport build_condition_report(const FunctionSpec& g,
                                       const ConditionSelection& sel,
                                       const QuadConfig& cfg);

}  // namespace frex
