#include "frex/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <vector>

#include "frex/errors.hpp"

namespace frex {

namespace {

constexpr double kPi = std::numbers::pi;

void require_half_line(const FunctionSpec& f, const char* who) {
    if (f.domain != Domain::HalfLine)
        throw std::invalid_argument(std::string(who) + ": needs a half-line function");
}

void require_positive_x(double x, const char* who) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument(std::string(who) + ": needs x > 0");
}

FunctionSpec with_eval(const FunctionSpec& like, std::function<double(double)> eval,
                       std::vector<double> jumps) {
    FunctionSpec s;
    s.eval = std::move(eval);
    s.domain = like.domain;
    s.jumps = std::move(jumps);
    return s;
}

std::vector<double> jumps_above(const FunctionSpec& g, double cut) {
    std::vector<double> out;
    for (double j : g.jumps)
        if (j > cut) out.push_back(j);
    return out;
}

std::vector<double> jumps_below(const FunctionSpec& g, double cut) {
    std::vector<double> out;
    for (double j : g.jumps)
        if (j < cut) out.push_back(j);
    return out;
}

// Shared plumbing for the three half-line Hilbert forms.  Each is
//   (2/pi) [ PV over the window [x/2, 3x/2]  +  regular integrals outside ],
// where the window kernel has been split into the true Cauchy part 1/(x-t)
// (handled by the difference-quotient principal value) plus a bounded
// remainder.  `sing_coeff` multiplies the PV part; `smooth` is the bounded
// window remainder; `outer` is the full kernel away from the window.
struct HalfLinePieces {
    double sing_coeff = 0.0;
    std::function<double(double)> smooth;   // t in [x/2, 3x/2]
    std::function<double(double)> outer;    // t in [0, x/2] U [3x/2, inf)
};

EvalResult assemble_half_line(const FunctionSpec& g, double x,
                              const HalfLinePieces& p, const QuadConfig& cfg) {
    const double lo = 0.5 * x, hi = 1.5 * x;

    const auto pv = pv_difference_quotient(g, x, 0.5 * x, cfg);

    const auto ge = g.eval;
    auto smooth = p.smooth;
    FunctionSpec win = with_eval(
        g, [ge, smooth](double t) { return ge(t) * smooth(t); },
        jumps_above(g, 0.0));
    const auto reg = integrate(win, lo, hi, cfg);

    auto outer = p.outer;
    FunctionSpec out_spec = with_eval(
        g, [ge, outer](double t) { return ge(t) * outer(t); }, g.jumps);
    // When x is large, [0, x/2] is a very wide interval whose integrand mass
    // sits near the origin; the ladder seeds keep the first panels from
    // stepping over it.
    const auto low = integrate(out_spec, 0.0, lo, cfg, origin_ladder(lo));
    auto [high, verdict] = integrate_halfline(out_spec, hi, cfg, jumps_above(g, hi));

    EvalResult res;
    const double scale = 2.0 / kPi;
    res.value = scale * (p.sing_coeff * pv.value + reg.value + low.value + high.value);
    res.err_estimate =
        scale * (std::fabs(p.sing_coeff) * pv.err_estimate + reg.err_estimate +
                 low.err_estimate + high.err_estimate);
    res.converged = pv.converged && reg.converged && low.converged && high.converged &&
                    verdict.kind == TailKind::Convergent &&
                    res.err_estimate <= 50.0 * cfg.tolerance_for(res.value);
    res.diagnostics["pv_mismatch"] = pv.diagnostics.at("pv_mismatch");
    if (pv.diagnostics.count("singularity_mismatch"))
        res.diagnostics["singularity_mismatch"] = 1.0;
    res.diagnostics["tail_kind"] = static_cast<double>(verdict.kind);
    return res;
}

double half_line_moment(const FunctionSpec& g, const QuadConfig& cfg, bool& trusted) {
    auto [mom, verdict] = integrate_halfline(g, 0.0, cfg.relaxed(), g.jumps);
    trusted = verdict.kind == TailKind::Convergent;
    return mom.value;
}

}  // namespace

const char* to_string(HilbertForm f) {
    switch (f) {
        case HilbertForm::FullLine: return "full";
        case HilbertForm::OddHalfLine: return "odd";
        case HilbertForm::EvenHalfLine: return "even";
        default: return "even-cancelled";
    }
}

EvalResult cosine_transform(const FunctionSpec& f, double x, const QuadConfig& cfg) {
    require_half_line(f, "cosine_transform");
    return integrate_oscillatory(f, OscKernel::Cos, x, cfg);
}

EvalResult sine_transform(const FunctionSpec& f, double x, const QuadConfig& cfg) {
    require_half_line(f, "sine_transform");
    return integrate_oscillatory(f, OscKernel::Sin, x, cfg);
}

EvalResult hilbert(const FunctionSpec& g, double x, HilbertForm form,
                   const QuadConfig& cfg) {
    cfg.validate();

    if (form == HilbertForm::FullLine) {
        const FunctionSpec gfl = as_full_line(g);
        auto res = integrate_pv(gfl, x, cfg);
        res.value /= kPi;
        res.err_estimate /= kPi;
        return res;
    }

    require_half_line(g, "hilbert");
    require_positive_x(x, "hilbert");

    const Parity want =
        form == HilbertForm::OddHalfLine ? Parity::Odd : Parity::Even;
    if (g.parity != want) {
        std::ostringstream msg;
        msg << "hilbert: the " << to_string(form) << " form needs "
            << to_string(want) << " parity, got " << to_string(g.parity);
        throw ParityMismatch(msg.str());
    }

    HalfLinePieces p;
    if (form == HilbertForm::OddHalfLine) {
        // t/(x^2-t^2) = -1/2 [ 1/(t-x) + 1/(t+x) ]; the 1/(t-x) part is
        // +1/2 of the 1/(x-t) principal value.
        p.sing_coeff = 0.5;
        p.smooth = [x](double t) { return -0.5 / (t + x); };
        p.outer = [x](double t) { return t / (x * x - t * t); };
    } else if (form == HilbertForm::EvenHalfLine) {
        // x/(x^2-t^2) = 1/2 [ 1/(x-t) + 1/(x+t) ].
        p.sing_coeff = 0.5;
        p.smooth = [x](double t) { return 0.5 / (x + t); };
        p.outer = [x](double t) { return x / (x * x - t * t); };
    } else {
        bool trusted = false;
        const double mom = half_line_moment(g, cfg, trusted);
        if (!trusted || std::fabs(mom) > kMomentTol) {
            std::ostringstream msg;
            msg << "hilbert: cancellation form needs a vanishing half-line moment; "
                << "int_0^inf g = " << mom
                << (trusted ? "" : " (and the scan did not even converge)");
            throw CancellationPreconditionFailed(msg.str());
        }
        // x/(x^2-t^2) - 1/x  =  t^2 / (x (x^2-t^2)).
        p.sing_coeff = 0.5;
        p.smooth = [x](double t) { return 0.5 / (x + t) - 1.0 / x; };
        p.outer = [x](double t) { return t * t / (x * (x * x - t * t)); };
    }
    return assemble_half_line(g, x, p, cfg);
}

double cesaro_kernel(double A, double N) {
    if (A == 0.0 || !std::isfinite(A))
        throw std::invalid_argument("cesaro_kernel: A must be nonzero and finite");
    if (!(N > 0.0) || !std::isfinite(N))
        throw std::invalid_argument("cesaro_kernel: N must be positive and finite");
    const double u = N * A;
    if (std::fabs(u) < 1e-2) {
        // 1/A - sin(NA)/(N A^2) cancels catastrophically for small NA; the
        // series N(u/6 - u^3/120 + u^5/5040) is exact to machine precision
        // here (the next term is u^7/362880).
        const double u2 = u * u;
        return N * u * (1.0 / 6.0 - u2 / 120.0 + u2 * u2 / 5040.0);
    }
    return 1.0 / A - std::sin(u) / (N * A * A);
}

EvalResult cesaro_hilbert_mean(const FunctionSpec& g, double x, double N,
                               const QuadConfig& cfg) {
    cfg.validate();
    if (!(N > 0.0) || !std::isfinite(N))
        throw std::invalid_argument("cesaro_hilbert_mean: N must be positive");
    if (!std::isfinite(x))
        throw std::invalid_argument("cesaro_hilbert_mean: bad x");

    const FunctionSpec gfl = as_full_line(g);
    const auto ge = gfl.eval;

    // Odd reduction: the kernel K_N is odd, so the full-line integral folds
    // to int_0^inf [g(x+t) - g(x-t)] K_N(t) dt.
    FunctionSpec diff;
    diff.domain = Domain::HalfLine;
    diff.eval = [ge, x](double t) { return ge(x + t) - ge(x - t); };
    for (double j : gfl.jumps) {
        const double s = std::fabs(j - x);
        if (s > 0.0) diff.jumps.push_back(s);
    }
    std::sort(diff.jumps.begin(), diff.jumps.end());
    diff.jumps.erase(std::unique(diff.jumps.begin(), diff.jumps.end()),
                     diff.jumps.end());

    const double t0 = kPi / N;
    const auto de = diff.eval;

    // [0, t0]: the full bounded kernel.
    FunctionSpec core_spec = with_eval(
        diff,
        [de, N](double t) {
            return t == 0.0 ? 0.0 : de(t) * cesaro_kernel(t, N);
        },
        diff.jumps);
    const auto core = integrate(core_spec, 0.0, t0, cfg);

    // [t0, inf): split K_N into 1/t (plain half-line integral)...
    FunctionSpec p_spec = with_eval(
        diff, [de](double t) { return de(t) / t; }, diff.jumps);
    auto [ppart, verdict] = integrate_halfline(
        p_spec, t0, cfg, diff.jumps, std::max(2.0 * std::fabs(x), 2.0));

    // ... minus sin(Nt)/(N t^2), summed between the kernel zeros k pi / N.
    FunctionSpec osc_spec = with_eval(
        diff,
        [de, N](double t) { return de(t) * std::sin(N * t) / (N * t * t); },
        diff.jumps);
    const auto osc = sum_oscillatory_cells(osc_spec, t0, kPi / N, cfg);

    EvalResult res;
    res.value = -(core.value + ppart.value - osc.value) / kPi;
    res.err_estimate =
        (core.err_estimate + ppart.err_estimate + osc.err_estimate) / kPi;
    res.converged = core.converged && ppart.converged && osc.converged &&
                    verdict.kind == TailKind::Convergent &&
                    res.err_estimate <= 50.0 * cfg.tolerance_for(res.value);
    res.diagnostics["cells"] = osc.diagnostics.at("cells");
    res.diagnostics["tail_kind"] = static_cast<double>(verdict.kind);
    for (const char* flag : {"slow_decay", "cells_exhausted"})
        if (osc.diagnostics.count(flag)) res.diagnostics[flag] = 1.0;
    return res;
}

TailVerdict classify_hilbert_l1(const FunctionSpec& g, const QuadConfig& cfg) {
    const QuadConfig rc = cfg.relaxed();
    FunctionSpec habs;
    habs.domain = Domain::HalfLine;
    if (g.domain == Domain::HalfLine && g.parity != Parity::None) {
        const HilbertForm form = g.parity == Parity::Odd ? HilbertForm::OddHalfLine
                                                         : HilbertForm::EvenHalfLine;
        habs.eval = [g, form, rc](double x) {
            return std::fabs(hilbert(g, x, form, rc).value);
        };
    } else {
        const FunctionSpec gfl = as_full_line(g);
        habs.eval = [gfl, rc](double x) {
            return std::fabs(hilbert(gfl, x, HilbertForm::FullLine, rc).value) +
                   std::fabs(hilbert(gfl, -x, HilbertForm::FullLine, rc).value);
        };
    }
    auto [res, verdict] = integrate_halfline(habs, 0.0, rc);
    (void)res;
    return verdict;
}

FunctionSpec tabulate_log_grid(const std::function<double(double)>& fn, Parity parity,
                               double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi))
        throw std::invalid_argument("tabulate_log_grid: need 0 < lo < hi");
    if (n < 8) throw std::invalid_argument("tabulate_log_grid: need at least 8 nodes");
    if (parity == Parity::None)
        throw ParityMismatch("tabulate_log_grid: a parity is required");

    struct Table {
        std::vector<double> lt;   // log t, ascending, uniform
        std::vector<double> v;
        double lo = 0.0, hi = 0.0;
        double tail_exp = 0.0;    // v ~ v_last (t/hi)^tail_exp beyond hi
        Parity parity = Parity::Even;
    };
    auto tab = std::make_shared<Table>();
    tab->lo = lo;
    tab->hi = hi;
    tab->parity = parity;
    tab->lt.resize(static_cast<std::size_t>(n));
    tab->v.resize(static_cast<std::size_t>(n));
    const double l0 = std::log(lo), l1 = std::log(hi);
    for (int i = 0; i < n; ++i) {
        const double lt = l0 + (l1 - l0) * static_cast<double>(i) / (n - 1);
        tab->lt[static_cast<std::size_t>(i)] = lt;
        tab->v[static_cast<std::size_t>(i)] = fn(std::exp(lt));
    }

    // Match a power law to (roughly) the last decade so evaluation past hi
    // keeps the decay instead of clamping.
    {
        const int span = std::max(2, n / 8);
        const double va = tab->v[static_cast<std::size_t>(n - 1 - span)];
        const double vb = tab->v[static_cast<std::size_t>(n - 1)];
        double p = -2.0;
        if (std::fabs(va) > 1e-300 && std::fabs(vb) > 1e-300 && va * vb > 0.0) {
            p = std::log(std::fabs(vb / va)) /
                (tab->lt[static_cast<std::size_t>(n - 1)] -
                 tab->lt[static_cast<std::size_t>(n - 1 - span)]);
        }
        tab->tail_exp = std::min(p, 0.0);
    }

    auto eval_abs = [tab](double t) -> double {
        const auto& lt = tab->lt;
        const auto& v = tab->v;
        const std::size_t n = lt.size();
        if (t <= tab->lo) {
            // Below the grid: even functions flatten toward 0, odd ones pass
            // through it linearly.
            if (tab->parity == Parity::Even) return v.front();
            return v.front() * (t / tab->lo);
        }
        if (t >= tab->hi) {
            const double vl = v.back();
            if (std::fabs(vl) < 1e-300) return 0.0;
            return vl * std::pow(t / tab->hi, tab->tail_exp);
        }
        const double l = std::log(t);
        const double step = (lt.back() - lt.front()) / static_cast<double>(n - 1);
        std::size_t i = static_cast<std::size_t>((l - lt.front()) / step);
        i = std::min(i, n - 2);
        // 4-point Lagrange in log t, stencil clamped at the ends.
        std::size_t s = i == 0 ? 0 : i - 1;
        s = std::min(s, n - 4);
        double acc = 0.0;
        for (std::size_t a = s; a < s + 4; ++a) {
            double w = 1.0;
            for (std::size_t b = s; b < s + 4; ++b)
                if (b != a) w *= (l - lt[b]) / (lt[a] - lt[b]);
            acc += w * v[a];
        }
        return acc;
    };

    FunctionSpec out;
    out.domain = Domain::FullLine;
    out.parity = parity;
    out.decay_exponent = -tab->tail_exp;
    if (parity == Parity::Even) {
        out.eval = [eval_abs](double t) { return eval_abs(std::fabs(t)); };
    } else {
        out.eval = [eval_abs](double t) {
            if (t == 0.0) return 0.0;
            return t < 0.0 ? -eval_abs(-t) : eval_abs(t);
        };
    }
    return out;
}

}  // namespace frex
