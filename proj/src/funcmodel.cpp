#include "frex/funcmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "frex/errors.hpp"

namespace frex {

namespace {

// Strict double parse: the whole token must be consumed.
double parse_double(const std::string& tok) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("grid: cannot parse number '" + tok + "'");
    }
    if (pos != tok.size() || !std::isfinite(v))
        throw std::invalid_argument("grid: cannot parse number '" + tok + "'");
    return v;
}

int parse_count(const std::string& tok) {
    double v = parse_double(tok);
    int n = static_cast<int>(v);
    if (v != static_cast<double>(n))
        throw std::invalid_argument("grid: point count must be an integer, got '" + tok + "'");
    return n;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

void validate_points(const std::vector<double>& pts) {
    if (pts.empty()) throw std::invalid_argument("grid: no points");
    for (double p : pts)
        if (!std::isfinite(p)) throw std::invalid_argument("grid: non-finite point");
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (!(pts[i] > pts[i - 1]))
            throw std::invalid_argument("grid: points must be strictly increasing");
}

}  // namespace

FunctionSpec extend(const FunctionSpec& f, Parity parity) {
    if (parity == Parity::None)
        throw ParityMismatch("extend: a parity (even or odd) is required");
    if (f.domain != Domain::HalfLine)
        throw std::invalid_argument("extend: input must be a half-line function");

    FunctionSpec out;
    out.domain = Domain::FullLine;
    out.parity = parity;
    out.decay_exponent = f.decay_exponent;
    for (double j : f.jumps) {
        if (j > 0.0) out.jumps.push_back(-j);
    }
    // The odd reflection pins h(0) = 0; if f(0+) != 0 that is a genuine jump,
    // so always give the integrator a breakpoint there.
    if (parity == Parity::Odd) out.jumps.push_back(0.0);
    for (double j : f.jumps) out.jumps.push_back(j);
    std::sort(out.jumps.begin(), out.jumps.end());
    out.jumps.erase(std::unique(out.jumps.begin(), out.jumps.end()), out.jumps.end());

    auto base = f.eval;
    if (parity == Parity::Even) {
        out.eval = [base](double t) { return base(std::fabs(t)); };
    } else {
        out.eval = [base](double t) {
            if (t == 0.0) return 0.0;
            return t < 0.0 ? -base(-t) : base(t);
        };
    }
    return out;
}

FunctionSpec as_full_line(const FunctionSpec& f) {
    if (f.domain == Domain::FullLine) return f;
    if (f.parity == Parity::None)
        throw ParityMismatch(
            "as_full_line: half-line function carries no parity, cannot extend");
    return extend(f, f.parity);
}

namespace {

FunctionSpec half_line(std::function<double(double)> eval, Parity parity,
                       std::optional<double> decay = std::nullopt,
                       std::vector<double> jumps = {}) {
    FunctionSpec s;
    s.eval = std::move(eval);
    s.domain = Domain::HalfLine;
    s.parity = parity;
    s.decay_exponent = decay;
    s.jumps = std::move(jumps);
    return s;
}

// sin(x)/x and (1 - cos x)/x with series branches so small x does not cancel.
double sinc(double x) {
    double ax = std::fabs(x);
    if (ax < 1e-3) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double cosc(double x) {
    double ax = std::fabs(x);
    if (ax < 1e-3) {
        double x2 = x * x;
        return x * (0.5 - x2 / 24.0 + x2 * x2 / 720.0);
    }
    return (1.0 - std::cos(x)) / x;
}

std::vector<CatalogEntry> build_catalog() {
    const double pi = std::numbers::pi;
    const double root_half_pi = std::sqrt(pi / 2.0);
    std::vector<CatalogEntry> cat;

    {
        CatalogEntry e;
        e.name = "exp_decay";
        e.f = half_line([](double t) { return std::exp(-t); }, Parity::None);
        e.Fc_closed = half_line([](double x) { return 1.0 / (1.0 + x * x); },
                                Parity::Even, 2.0);
        e.Fs_closed = half_line([](double x) { return x / (1.0 + x * x); },
                                Parity::Odd, 1.0);
        e.HFc_closed = half_line([](double x) { return x / (1.0 + x * x); },
                                 Parity::Odd, 1.0);
        e.Fc_integrable = true;
        e.Fs_integrable = false;  // x/(1+x^2) decays like 1/x
        e.notes =
            "f(t) = exp(-t); Laplace-kernel integrals give Fc = 1/(1+x^2), "
            "Fs = x/(1+x^2), and the Hilbert transform of Fc equals Fs.";
        cat.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "t_exp_decay";
        e.f = half_line([](double t) { return t * std::exp(-t); }, Parity::None);
        e.Fc_closed = half_line(
            [](double x) {
                double d = 1.0 + x * x;
                return (1.0 - x * x) / (d * d);
            },
            Parity::Even, 2.0);
        e.Fs_closed = half_line(
            [](double x) {
                double d = 1.0 + x * x;
                return 2.0 * x / (d * d);
            },
            Parity::Odd, 3.0);
        e.HFc_closed = e.Fs_closed;
        e.Fc_integrable = true;
        e.Fs_integrable = true;
        e.notes =
            "f(t) = t exp(-t); differentiating the exp_decay pair in x gives "
            "Fc = (1-x^2)/(1+x^2)^2 and Fs = 2x/(1+x^2)^2, both integrable.";
        cat.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "gaussian";
        e.f = half_line([](double t) { return std::exp(-0.5 * t * t); }, Parity::None);
        e.Fc_closed = half_line(
            [root_half_pi](double x) { return root_half_pi * std::exp(-0.5 * x * x); },
            Parity::Even);
        e.Fc_integrable = true;
        e.Fs_integrable = false;  // Fs ~ 1/x because f(0) != 0
        e.notes =
            "f(t) = exp(-t^2/2), self-reciprocal under the cosine transform "
            "(Fc = sqrt(pi/2) exp(-x^2/2)); the sine transform has no "
            "elementary closed form and decays only like 1/x.";
        cat.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "indicator";
        e.f = half_line([](double t) { return (t >= 0.0 && t <= 1.0) ? 1.0 : 0.0; },
                        Parity::None, std::nullopt, {1.0});
        e.Fc_closed = half_line([](double x) { return sinc(x); }, Parity::Even, 1.0);
        e.Fs_closed = half_line([](double x) { return cosc(x); }, Parity::Odd, 1.0);
        e.Fc_integrable = false;
        e.Fs_integrable = false;
        e.notes =
            "f = 1 on [0,1], 0 beyond; Fc = sin(x)/x and Fs = (1-cos x)/x, "
            "neither absolutely integrable.";
        cat.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "lorentzian";
        e.f = half_line([](double t) { return 1.0 / (1.0 + t * t); }, Parity::Even, 2.0);
        e.Fc_closed = half_line([pi](double x) { return 0.5 * pi * std::exp(-x); },
                                Parity::Even);
        e.Fc_integrable = true;
        e.Fs_integrable = false;  // Fs ~ 1/x because f(0) != 0
        e.notes =
            "f(t) = 1/(1+t^2), even; Fc = (pi/2) exp(-x).  The half-line "
            "moment is pi/2, so the cancellation-form Hilbert operator "
            "rejects it.";
        cat.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "odd_lorentzian";
        e.f = half_line([](double t) { return t / (1.0 + t * t); }, Parity::Odd, 1.0);
        e.Fs_closed = half_line([pi](double x) { return 0.5 * pi * std::exp(-x); },
                                Parity::Odd);
        e.Fs_integrable = true;
        e.notes =
            "f(t) = t/(1+t^2), odd, not absolutely integrable; the sine "
            "transform still converges to (pi/2) exp(-x) (value pi/2 as "
            "x -> 0+, while Fs(0) = 0).";
        cat.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "even_vm";
        e.f = half_line(
            [](double t) {
                double d = 1.0 + t * t;
                return (1.0 - t * t) / (d * d);
            },
            Parity::Even, 2.0);
        e.Fc_closed = half_line([pi](double x) { return 0.5 * pi * x * std::exp(-x); },
                                Parity::Even);
        e.Fc_integrable = true;
        e.Fs_integrable = false;
        e.notes =
            "f(t) = (1-t^2)/(1+t^2)^2, even with vanishing half-line moment "
            "(antiderivative t/(1+t^2)); Fc = (pi/2) x exp(-x).";
        cat.push_back(std::move(e));
    }
    {
        CatalogEntry e;
        e.name = "hermite_gaussian";
        e.f = half_line(
            [](double t) { return (1.0 - t * t) * std::exp(-0.5 * t * t); },
            Parity::Even);
        e.Fc_closed = half_line(
            [root_half_pi](double x) {
                return root_half_pi * x * x * std::exp(-0.5 * x * x);
            },
            Parity::Even);
        e.Fc_integrable = true;
        e.Fs_integrable = false;
        e.notes =
            "f(t) = (1-t^2) exp(-t^2/2), even with vanishing half-line moment; "
            "Fc = sqrt(pi/2) x^2 exp(-x^2/2) by differentiating the gaussian "
            "pair twice.";
        cat.push_back(std::move(e));
    }
    return cat;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> cat = build_catalog();
    return cat;
}

const CatalogEntry* find_entry(std::string_view name) {
    for (const auto& e : catalog())
        if (e.name == name) return &e;
    return nullptr;
}

Grid Grid::uniform(double a, double b, int n) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("grid: need finite a < b");
    if (n < 2) throw std::invalid_argument("grid: need at least 2 points");
    Grid g;
    g.kind = GridKind::Uniform;
    g.points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g.points.push_back(a + (b - a) * static_cast<double>(i) / (n - 1));
    g.points.back() = b;
    validate_points(g.points);
    return g;
}

Grid Grid::logarithmic(double a, double b, int n) {
    if (!(a > 0.0) || !(a < b) || !std::isfinite(b))
        throw std::invalid_argument("grid: need 0 < a < b");
    if (n < 2) throw std::invalid_argument("grid: need at least 2 points");
    Grid g;
    g.kind = GridKind::Logarithmic;
    g.points.reserve(static_cast<std::size_t>(n));
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i)
        g.points.push_back(std::exp(la + (lb - la) * static_cast<double>(i) / (n - 1)));
    g.points.front() = a;
    g.points.back() = b;
    validate_points(g.points);
    return g;
}

Grid Grid::explicit_points(std::vector<double> pts) {
    validate_points(pts);
    Grid g;
    g.kind = GridKind::Explicit;
    g.points = std::move(pts);
    return g;
}

Grid Grid::parse(const std::string& text) {
    auto parts = split(text, ':');
    if (parts.empty()) throw std::invalid_argument("grid: empty spec");
    const std::string& head = parts[0];
    if (head == "lin" || head == "log") {
        if (parts.size() != 4)
            throw std::invalid_argument("grid: expected '" + head + ":a:b:n'");
        double a = parse_double(parts[1]);
        double b = parse_double(parts[2]);
        int n = parse_count(parts[3]);
        return head == "lin" ? uniform(a, b, n) : logarithmic(a, b, n);
    }
    if (head == "at") {
        if (parts.size() != 2)
            throw std::invalid_argument("grid: expected 'at:x1,x2,...'");
        std::vector<double> pts;
        for (const auto& tok : split(parts[1], ',')) pts.push_back(parse_double(tok));
        return explicit_points(std::move(pts));
    }
    throw std::invalid_argument("grid: unknown form '" + head +
                                "' (expected lin, log or at)");
}

const char* to_string(Domain d) {
    return d == Domain::HalfLine ? "half_line" : "full_line";
}

const char* to_string(Parity p) {
    switch (p) {
        case Parity::Even: return "even";
        case Parity::Odd: return "odd";
        default: return "none";
    }
}

const char* to_string(GridKind k) {
    switch (k) {
        case GridKind::Uniform: return "uniform";
        case GridKind::Logarithmic: return "logarithmic";
        default: return "explicit";
    }
}

}  // namespace frex
