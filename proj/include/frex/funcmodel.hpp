#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace frex {

enum class Domain { HalfLine, FullLine };
enum class Parity { Even, Odd, None };

// An evaluable real-valued function together with the metadata the quadrature
// and transform layers need: where it lives, how it reflects to the full
// line, roughly how fast it decays, and where it is known to jump.
struct FunctionSpec {
    std::function<double(double)> eval;
    Domain domain = Domain::HalfLine;
    Parity parity = Parity::None;
    // |f(t)| = O(|t|^-p) as |t| -> inf, when known.  Purely advisory.
    std::optional<double> decay_exponent;
    // Known discontinuities, ascending.  The adaptive integrator seeds panel
    // breakpoints here so jumps never sit inside a panel.
    std::vector<double> jumps;

    double operator()(double t) const { return eval(t); }
};

// Reflect a half-line function to the full line with the given parity.
// The result evaluates h(-t) = +/- h(t) bit-for-bit symmetrically, and the
// odd extension forces h(0) = 0.  Parity::None is rejected: there is no
// canonical extension to apply.
FunctionSpec extend(const FunctionSpec& f, Parity parity);

// Convenience: full-line view of any spec.  Half-line specs are extended by
// their declared parity; full-line specs pass through unchanged.
FunctionSpec as_full_line(const FunctionSpec& f);

// A named catalog function with whatever closed forms are known for it.
// Closed forms carry the same FunctionSpec metadata as everything else, so
// they can be fed straight back into the operators.
struct CatalogEntry {
    std::string name;
    FunctionSpec f;
    std::optional<FunctionSpec> Fc_closed;    // cosine transform, when known
    std::optional<FunctionSpec> Fs_closed;    // sine transform, when known
    std::optional<FunctionSpec> HFc_closed;   // Hilbert transform of Fc, when known
    std::optional<bool> Fc_integrable;        // is int |Fc| finite?
    std::optional<bool> Fs_integrable;
    std::string notes;                        // where the closed forms come from
};

// Built-in function table.  Built once, immutable afterwards.
const std::vector<CatalogEntry>& catalog();

// Lookup by name; nullptr when absent.
const CatalogEntry* find_entry(std::string_view name);

enum class GridKind { Uniform, Logarithmic, Explicit };

// Strictly increasing, finite, nonempty evaluation points.
struct Grid {
    std::vector<double> points;
    GridKind kind = GridKind::Explicit;

    static Grid uniform(double a, double b, int n);
    static Grid logarithmic(double a, double b, int n);  // a > 0
    static Grid explicit_points(std::vector<double> pts);

    // Mini-grammar used by the CLI: "lin:a:b:n", "log:a:b:n", "at:x1,x2,...".
    // Throws std::invalid_argument on malformed input.
    static Grid parse(const std::string& text);

    std::size_t size() const { return points.size(); }
};

const char* to_string(Domain d);
const char* to_string(Parity p);
const char* to_string(GridKind k);

}  // namespace frex
