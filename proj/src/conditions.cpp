#include "frex/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "frex/errors.hpp"
#include "frex/transforms.hpp"  // kMomentTol: shared with the cancelled Hilbert form

namespace frex {

namespace {

// Half-line profile of |g|: half-line specs integrate over their own domain
// (tagged parity doubles them), full-line specs fold both sides.  The
// returned factor multiplies the half-line integral.
FunctionSpec abs_profile(const FunctionSpec& g, double& factor) {
    FunctionSpec s;
    s.domain = Domain::HalfLine;
    const auto ge = g.eval;
    if (g.domain == Domain::HalfLine) {
        factor = g.parity == Parity::None ? 1.0 : 2.0;
        s.eval = [ge](double t) { return std::fabs(ge(t)); };
        s.jumps = g.jumps;
    } else {
        factor = 1.0;
        s.eval = [ge](double t) { return std::fabs(ge(t)) + std::fabs(ge(-t)); };
        for (double j : g.jumps) {
            const double a = std::fabs(j);
            if (a > 0.0) s.jumps.push_back(a);
        }
        std::sort(s.jumps.begin(), s.jumps.end());
        s.jumps.erase(std::unique(s.jumps.begin(), s.jumps.end()), s.jumps.end());
    }
    return s;
}

// Signed version of the same folding, for the moment itself.
FunctionSpec signed_profile(const FunctionSpec& g, double& factor) {
    FunctionSpec s = abs_profile(g, factor);
    const auto ge = g.eval;
    if (g.domain == Domain::HalfLine) {
        // A tagged odd half-line function never reaches here (handled before
        // any quadrature); even and untagged ones integrate as they are.
        s.eval = ge;
    } else {
        s.eval = [ge](double t) { return ge(t) + ge(-t); };
    }
    return s;
}

CondValue cond_from(const EvalResult& res, const TailVerdict& verdict, double factor) {
    CondValue v;
    v.tail = verdict;
    switch (verdict.kind) {
        case TailKind::Convergent:
            v.kind = CondKind::Finite;
            v.value = factor * res.value;
            break;
        case TailKind::Inconclusive:
            v.kind = CondKind::Inconclusive;
            break;
        default:
            v.kind = CondKind::Divergent;
            break;
    }
    return v;
}

// Internal signal: a pointwise smoothness slice diverges, so the outer
// integral is meaningless and we bail out of the quadrature mid-flight.
struct SliceDivergent {
    double x;
};

constexpr double kSliceRatio = 500.0;     // per 3-decade probe shrink
constexpr double kSliceScaleMin = 1e6;    // smallest quotient worth flagging

}  // namespace

const char* to_string(CondKind k) {
    switch (k) {
        case CondKind::Finite: return "finite";
        case CondKind::Divergent: return "divergent";
        default: return "inconclusive";
    }
}

std::pair<double, bool> check_vanishing_moment(const FunctionSpec& g,
                                               const QuadConfig& cfg) {
    cfg.validate();
    // Odd functions have a vanishing moment identically; no quadrature.
    if (g.parity == Parity::Odd) return {0.0, true};

    double afac = 1.0;
    const FunctionSpec prof = abs_profile(g, afac);
    auto [ares, averdict] = integrate_halfline(prof, 0.0, cfg.relaxed(), prof.jumps);
    (void)ares;
    if (averdict.kind != TailKind::Convergent) {
        std::ostringstream msg;
        msg << "check_vanishing_moment: |g| is not integrable (tail "
            << to_string(averdict.kind) << ")";
        throw NotIntegrable(msg.str());
    }

    double sfac = 1.0;
    const FunctionSpec sig = signed_profile(g, sfac);
    auto [mres, mverdict] = integrate_halfline(sig, 0.0, cfg, sig.jumps);
    (void)mverdict;
    const double value = sfac * mres.value;
    return {value, std::fabs(value) <= kMomentTol};
}

CondValue check_log_weight(const FunctionSpec& g, const QuadConfig& cfg) {
    cfg.validate();
    double factor = 1.0;
    FunctionSpec prof = abs_profile(g, factor);
    const auto pe = prof.eval;
    FunctionSpec weighted;
    weighted.domain = Domain::HalfLine;
    weighted.jumps = prof.jumps;
    weighted.eval = [pe](double t) { return pe(t) * std::log(3.0 * t); };
    auto [res, verdict] =
        integrate_halfline(weighted, 0.5, cfg, weighted.jumps);
    return cond_from(res, verdict, factor);
}

CondValue check_local_smoothness(const FunctionSpec& g, const QuadConfig& cfg) {
    cfg.validate();
    const QuadConfig rc = cfg.relaxed();
    QuadConfig inner_cfg = rc;
    inner_cfg.max_subdiv = 200;

    // Slices with |x| < 1 stay strictly one side of the origin (the window
    // half-width is min(|x|,1)/2), so an untagged half-line function is
    // perfectly well defined here as long as we only integrate over x > 0.
    const bool half = g.domain == Domain::HalfLine;
    if (g.domain == Domain::FullLine && !g.eval)
        throw std::invalid_argument("check_local_smoothness: empty function");
    const auto ge = g.eval;
    const std::vector<double> jumps = g.jumps;

    auto slice = [ge, &jumps, &inner_cfg](double x) -> double {
        const double h = 0.5 * std::min(std::fabs(x), 1.0);
        if (h <= 0.0) return 0.0;
        const double gx = ge(x);

        static constexpr double kProbes[3] = {1e-3, 1e-6, 1e-9};
        double r[3];
        for (int i = 0; i < 3; ++i) {
            const double tau = std::min(kProbes[i], 0.5 * h);
            r[i] = (std::fabs(ge(x + tau) - gx) + std::fabs(ge(x - tau) - gx)) / tau;
        }
        // A difference quotient that keeps growing like 1/tau across six
        // decades is a non-removable discontinuity: the inner integral would
        // diverge logarithmically (or worse).
        const double floor = 1.0 + std::fabs(gx);
        if (r[2] > kSliceScaleMin * floor && r[2] > kSliceRatio * r[1] &&
            r[1] > kSliceRatio * std::max(r[0], floor * 1e-12))
            throw SliceDivergent{x};

        const double tau_min = std::min(kProbes[2], 0.5 * h);
        FunctionSpec integrand;
        integrand.domain = Domain::HalfLine;
        integrand.eval = [ge, gx, x](double t) {
            return (std::fabs(ge(x + t) - gx) + std::fabs(ge(x - t) - gx)) / t;
        };
        for (double j : jumps) {
            const double s = std::fabs(j - x);
            if (s > tau_min && s < h) integrand.jumps.push_back(s);
        }
        std::sort(integrand.jumps.begin(), integrand.jumps.end());
        const auto inner = integrate(integrand, tau_min, h, inner_cfg);
        // Below tau_min the quotient is essentially constant at r[2].
        return inner.value + r[2] * tau_min;
    };

    // Probe declared jumps first: each is a divergent slice by construction,
    // and reporting the declared point beats whatever quadrature node the
    // outer integral would have tripped on.
    for (double j : jumps) {
        if (half && j <= 0.0) continue;
        try {
            (void)slice(j);
        } catch (const SliceDivergent& s) {
            CondValue v;
            v.kind = CondKind::Divergent;
            v.tail.kind = TailKind::DivergentLogarithmic;
            v.bad_x = s.x;
            return v;
        }
    }

    double factor = 1.0;
    FunctionSpec outer;
    outer.domain = Domain::HalfLine;
    if (half) {
        factor = g.parity == Parity::None ? 1.0 : 2.0;
        outer.eval = slice;
        outer.jumps = jumps;
    } else {
        // Parity-symmetric inputs have symmetric slices; fold in general.
        outer.eval = [slice](double t) { return slice(t) + slice(-t); };
        for (double j : jumps) {
            const double a = std::fabs(j);
            if (a > 0.0) outer.jumps.push_back(a);
        }
        std::sort(outer.jumps.begin(), outer.jumps.end());
        outer.jumps.erase(std::unique(outer.jumps.begin(), outer.jumps.end()),
                          outer.jumps.end());
    }

    try {
        auto [res, verdict] = integrate_halfline(outer, 0.0, rc, outer.jumps);
        return cond_from(res, verdict, factor);
    } catch (const SliceDivergent& s) {
        CondValue v;
        v.kind = CondKind::Divergent;
        v.tail.kind = TailKind::DivergentLogarithmic;
        v.bad_x = s.x;
        return v;
    }
}

CondValue check_zygmund_llogl(const FunctionSpec& g, const QuadConfig& cfg) {
    cfg.validate();
    const auto ge = g.eval;
    auto zyg = [](double a) { return a > 1.0 ? a * std::log(a) : 0.0; };

    FunctionSpec prof;
    prof.domain = Domain::HalfLine;
    double factor = 1.0;
    if (g.domain == Domain::HalfLine) {
        prof.eval = [ge, zyg](double t) { return zyg(std::fabs(ge(t))); };
        prof.jumps = g.jumps;
    } else {
        prof.eval = [ge, zyg](double t) {
            return zyg(std::fabs(ge(t))) + zyg(std::fabs(ge(-t)));
        };
        for (double j : g.jumps) {
            const double a = std::fabs(j);
            if (a > 0.0) prof.jumps.push_back(a);
        }
        std::sort(prof.jumps.begin(), prof.jumps.end());
    }
    auto [res, verdict] = integrate_halfline(prof, 0.0, cfg, prof.jumps);
    return cond_from(res, verdict, factor);
}

CondValue aq_norm(const FunctionSpec& g, double q, const QuadConfig& cfg) {
    cfg.validate();
    if (g.domain != Domain::HalfLine)
        throw std::invalid_argument("aq_norm: needs a half-line function");
    if (std::isnan(q) || q <= 1.0)
        throw InvalidQ("aq_norm: q must lie in (1, inf]");

    const QuadConfig rc = cfg.relaxed();
    QuadConfig inner_cfg = rc;
    inner_cfg.max_subdiv = 200;

    const auto ge = g.eval;
    const std::vector<double> jumps = g.jumps;
    const bool qinf = std::isinf(q);

    // phi(u): the q-mean of |g| over the dyadic window [u, 2u].  For q = inf
    // a 64-point sweep stands in for the essential sup (a lower bound, which
    // is the honest direction for detecting divergence).
    auto phi = [ge, &jumps, &inner_cfg, q, qinf](double u) -> double {
        if (qinf) {
            double m = 0.0;
            for (int i = 0; i < 64; ++i)
                m = std::max(m, std::fabs(ge(u * (1.0 + static_cast<double>(i) / 63.0))));
            return m;
        }
        FunctionSpec p;
        p.domain = Domain::HalfLine;
        p.eval = [ge, q](double t) { return std::pow(std::fabs(ge(t)), q); };
        for (double j : jumps)
            if (j > u && j < 2.0 * u) p.jumps.push_back(j);
        const auto inner = integrate(p, u, 2.0 * u, inner_cfg);
        return std::pow(std::max(inner.value, 0.0) / u, 1.0 / q);
    };

    FunctionSpec outer;
    outer.domain = Domain::HalfLine;
    outer.eval = phi;
    for (double j : jumps) {
        if (j > 0.0) {
            outer.jumps.push_back(j);
            outer.jumps.push_back(0.5 * j);  // phi kinks when 2u crosses a jump
        }
    }
    std::sort(outer.jumps.begin(), outer.jumps.end());
    outer.jumps.erase(std::unique(outer.jumps.begin(), outer.jumps.end()),
                      outer.jumps.end());

    constexpr double kOuterMin = 1e-6;
    auto [res, verdict] = integrate_halfline(outer, kOuterMin, rc, outer.jumps);

    // The neglected (0, kOuterMin] head is at most u_min * sup_{(0, 2u_min]} |g|,
    // far below the relaxed tolerance for any bounded g.
    return cond_from(res, verdict, 1.0);
}

std::map<std::string, TruncationBound> verify_truncation_constants(
    const FunctionSpec& g, const QuadConfig& cfg, bool require_canc) {
    cfg.validate();
    if (g.domain != Domain::HalfLine)
        throw std::invalid_argument("verify_truncation_constants: needs a half-line function");

    const QuadConfig rc = cfg.relaxed();
    const auto ge = g.eval;
    const std::vector<double> jumps = g.jumps;

    FunctionSpec absg;
    absg.domain = Domain::HalfLine;
    absg.eval = [ge](double t) { return std::fabs(ge(t)); };
    absg.jumps = jumps;
    auto [normres, normverdict] = integrate_halfline(absg, 0.0, rc, jumps);
    if (normverdict.kind != TailKind::Convergent)
        throw NotIntegrable("verify_truncation_constants: ||g||_1 does not converge");
    const double norm = normres.value;

    // Eligibility for the cancellation bound: even parity and a numerically
    // vanishing half-line moment.
    bool even = g.parity == Parity::Even;
    bool moment_ok = false;
    double moment = 0.0;
    if (even) {
        auto [m, mv] = integrate_halfline(g, 0.0, rc, jumps);
        moment = m.value;
        moment_ok = mv.kind == TailKind::Convergent && std::fabs(moment) <= kMomentTol;
    }
    if (require_canc) {
        if (!even)
            throw ParityMismatch(
                "verify_truncation_constants: cancellation bound needs even parity");
        if (!moment_ok) {
            std::ostringstream msg;
            msg << "verify_truncation_constants: cancellation bound needs a vanishing "
                   "half-line moment; int_0^inf g = "
                << moment;
            throw CancellationPreconditionFailed(msg.str());
        }
    }

    QuadConfig icfg = rc;
    icfg.max_subdiv = 400;

    enum Which { Far, Near, Canc };
    auto inner = [&](Which w, double x) -> double {
        if (w == Far) {
            FunctionSpec f;
            f.domain = Domain::HalfLine;
            f.eval = [ge, x](double t) { return ge(t) / (x - t); };
            for (double j : jumps)
                if (j > 1.5 * x) f.jumps.push_back(j);
            auto [r, vd] = integrate_halfline(f, 1.5 * x, icfg, f.jumps);
            (void)vd;
            return r.value;
        }
        FunctionSpec f;
        f.domain = Domain::HalfLine;
        if (w == Near)
            f.eval = [ge, x](double t) { return t * ge(t) / (x * x - t * t); };
        else
            f.eval = [ge, x](double t) {
                return t * t * ge(t) / (x * (x * x - t * t));
            };
        for (double j : jumps)
            if (j < 0.5 * x) f.jumps.push_back(j);
        // Ladder seeds: for large x the integrand's mass hides at the far
        // left of [0, x/2].
        return integrate(f, 0.0, 0.5 * x, icfg, origin_ladder(0.5 * x)).value;
    };

    auto outer_l1 = [&](Which w) -> double {
        FunctionSpec f;
        f.domain = Domain::HalfLine;
        f.eval = [&inner, w](double x) { return std::fabs(inner(w, x)); };
        for (double j : jumps) {
            if (j > 0.0) {
                f.jumps.push_back(j / 1.5);  // 3x/2 crosses the jump
                f.jumps.push_back(2.0 * j);  // x/2 crosses the jump
            }
        }
        std::sort(f.jumps.begin(), f.jumps.end());
        auto [r, vd] = integrate_halfline(f, 0.0, rc, f.jumps);
        (void)vd;
        return r.value;
    };

    auto make = [&](double lhs, double bound) {
        TruncationBound b;
        b.lhs = lhs;
        b.bound = bound;
        b.ratio = norm > 0.0 ? lhs / norm : 0.0;
        b.pass = b.ratio <= bound + 1e-3;
        return b;
    };

    std::map<std::string, TruncationBound> out;
    if (norm <= cfg.abs_tol) {
        out["far"] = make(0.0, std::log(3.0));
        out["near"] = make(0.0, 2.0 / 3.0);
        if (even) out["canc"] = make(0.0, 1.0 / 6.0);
        return out;
    }
    out["far"] = make(outer_l1(Far), std::log(3.0));
    out["near"] = make(outer_l1(Near), 2.0 / 3.0);
    if (even && moment_ok) out["canc"] = make(outer_l1(Canc), 1.0 / 6.0);
    return out;
}

ConditionReport build_condition_report(const FunctionSpec& g,
                                       const ConditionSelection& sel,
                                       const QuadConfig& cfg) {
    cfg.validate();
    ConditionReport rep;

    if (sel.vm) {
        auto [value, pass] = check_vanishing_moment(g, cfg);
        rep.vm_value = value;
        rep.vm_pass = pass;
    }
    if (sel.logc) rep.logc = check_log_weight(g, cfg);
    if (sel.local) rep.local = check_local_smoothness(g, cfg);
    if (sel.llogl) rep.llogl = check_zygmund_llogl(g, cfg);
    for (double q : sel.aq_qs) rep.aq[q] = aq_norm(g, q, cfg);

    if (sel.vm) {
        // Sufficiency aggregate: the moment must pass and every condition
        // actually computed must come out finite.  A failed sufficient
        // condition never proves non-membership, so the flag only ever
        // claims plausibility.
        bool ok = *rep.vm_pass;
        const auto finite = [](const std::optional<CondValue>& c) {
            return !c || c->kind == CondKind::Finite;
        };
        ok = ok && finite(rep.logc) && finite(rep.local) && finite(rep.llogl);
        for (const auto& [q, v] : rep.aq) {
            (void)q;
            ok = ok && v.kind == CondKind::Finite;
        }
        rep.h1_plausible = ok;
    }
    return rep;
}

}  // namespace frex
