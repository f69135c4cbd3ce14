#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>

#include "frex/funcmodel.hpp"

namespace frex {

// Shared knobs for every integral the library computes.  Tolerances are
// targets for the adaptive engine; the classifier fields control how
// half-line tails are probed for divergence.
struct QuadConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_subdiv = 2000;        // adaptive bisection budget per integrate() call
    double pv_excision = 1e-4;    // base excision half-width for principal values
    double tail_start = 50.0;     // where dyadic tail blocks begin
    int tail_blocks = 12;         // number of dyadic blocks probed
    int divergence_window = 8;    // trailing blocks used for the growth fit

    // Throws std::invalid_argument unless all fields are positive,
    // max_subdiv >= 16 and tail_blocks >= 4.
    void validate() const;

    double tolerance_for(double value) const;

    // Loosened copy used for scans whose only job is to classify an integral
    // (integrable or not), where each integrand sample is itself a quadrature.
    QuadConfig relaxed() const;
};

// Every integration routine reports through this.  `converged` means the
// engine believes err_estimate; when it is false the value is a best effort
// and `diagnostics` says what went wrong (budget_exhausted, slow_decay,
// pv_mismatch, tail_kind, ...).
struct EvalResult {
    double value = 0.0;
    double err_estimate = 0.0;
    bool converged = false;
    std::map<std::string, double> diagnostics;
};

enum class TailKind {
    Convergent,
    DivergentLogarithmic,   // block sums roughly constant: integral grows like log
    DivergentPolynomial,    // block sums grow geometrically: integral grows like a power
    Inconclusive,
};

const char* to_string(TailKind k);

// Which of the competing block models fit best.
enum class TailModel {
    Constant,   // B_k ~ c                    (integrand ~ 1/t)
    Geometric,  // B_k ~ c 2^{alpha k}        (integrand ~ t^{alpha - 1})
    Harmonic,   // B_k ~ c (k + s)^{-m}       (integrand ~ 1/(t log^m t))
};

const char* to_string(TailModel m);

// Outcome of fitting dyadic block magnitudes B_k over [R 2^k, R 2^{k+1}].
// fitted_rate is alpha (per octave) for the geometric model, the block level
// c for the constant model, and -m for the harmonic model.
struct TailVerdict {
    TailKind kind = TailKind::Inconclusive;
    TailModel model = TailModel::Geometric;
    double fitted_rate = 0.0;
    double residual = 0.0;  // relative rms misfit of the chosen model
};

// Fit the trailing `divergence_window` block magnitudes with constant,
// geometric and harmonic models, keep the best fit, and decide convergence:
// constant blocks diverge like a logarithm, geometric blocks by the sign of
// alpha, harmonic blocks by m (<= 1 diverges, the borderline Abel family).
// `scale_hint` (e.g. the head integral) lets clearly negligible tails
// short-circuit to Convergent.  `anchor` is the t-value where block 0 starts;
// it fixes the harmonic model's offset s = log2(anchor) + 1/2 (pass 0 when
// unknown; a neutral offset is used).
TailVerdict classify_blocks(std::span<const double> blocks, const QuadConfig& cfg,
                            double scale_hint = 0.0, double anchor = 0.0);

// Seed points hi/2, hi/4, ..., down to max(floor, hi * 1e-7), ascending.
// Breakpoints like these give the adaptive engine a trail of panels toward
// the origin of a very wide interval, so integrand mass concentrated near 0
// cannot be stepped over by the first coarse rule application.
std::vector<double> origin_ladder(double hi, double floor_at = 1.0);

// Adaptive Gauss-Kronrod (7/15) integration over [a, b], bisecting the worst
// panel first.  Known jumps of f inside (a, b) and any extra `breakpoints`
// become initial panel edges.  Throws NonFiniteValue if f evaluates to NaN or
// inf; on an exhausted subdivision budget returns converged == false with
// diagnostics["budget_exhausted"] = 1.
EvalResult integrate(const FunctionSpec& f, double a, double b, const QuadConfig& cfg,
                     std::span<const double> breakpoints = {});

// Integral over [a, inf): adaptive head [a, R0] followed by dyadic blocks
// whose magnitudes are fed to classify_blocks.  When the tail is convergent
// the geometric fit also supplies the beyond-last-block extrapolation.  The
// head extends to max(a, tail_start, head_extent); pass head_extent when the
// integrand has known structure past tail_start.
std::pair<EvalResult, TailVerdict> integrate_halfline(
    const FunctionSpec& f, double a, const QuadConfig& cfg,
    std::span<const double> breakpoints = {}, double head_extent = 0.0);

enum class OscKernel { Cos, Sin };

// Integral of f(t) * cos(x t) or f(t) * sin(x t) over [0, inf) for x >= 0.
// An adaptive head runs to the first kernel zero past tail_start (capped at
// 64 half-periods when x is large); after that, one Gauss-Kronrod panel per
// half-period produces an alternating series that is summed with repeated
// averaging.  x == 0 degenerates to integrate_halfline (Cos) or exact zero
// (Sin).  If the cell magnitudes refuse to decay the result carries
// converged == false and diagnostics["slow_decay"] = 1.
EvalResult integrate_oscillatory(const FunctionSpec& f, OscKernel kernel, double x,
                                 const QuadConfig& cfg);

// Sum integral cells [t0 + k h, t0 + (k+1) h], k = 0, 1, ..., where h is a
// half-period of an oscillatory factor inside `f`, accelerating the
// alternating partial sums by repeated averaging.  Building block of
// integrate_oscillatory and of the regularized Hilbert means.
EvalResult sum_oscillatory_cells(const FunctionSpec& f, double t0, double h,
                                 const QuadConfig& cfg);

// Principal value of integral g(t) / (x - t) dt over the full line (note the
// orientation: the kernel is 1/(x - t)).  The window [x-1, x+1] is handled by
// rewriting through the difference quotient (g(x+s) - g(x))/(-s), whose
// integrable part survives the symmetric excision; three excision radii
// (pv_excision, /2, /4) give a Richardson-extrapolated value plus a
// consistency check.  A mismatch (g discontinuous at x, say) is reported as
// converged == false with diagnostics["singularity_mismatch"] = 1.
EvalResult integrate_pv(const FunctionSpec& g, double x, const QuadConfig& cfg);

// The windowed core of integrate_pv: PV of integral g(t)/(x - t) dt over
// [x - halfwidth, x + halfwidth].  Exposed because the half-line Hilbert
// forms reuse it on the window [x/2, 3x/2].
EvalResult pv_difference_quotient(const FunctionSpec& g, double x, double halfwidth,
                                  const QuadConfig& cfg);

}  // namespace frex
