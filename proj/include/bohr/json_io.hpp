#pragma once

#include <string>
#include <variant>

#include "json.hpp"

#include "bohr/littlewood_paley.hpp"
#include "bohr/multiplier.hpp"
#include "bohr/norms.hpp"
#include "bohr/polynomials.hpp"
#include "bohr/projections.hpp"
#include "bohr/transference.hpp"

namespace bohr::io {

using Json = nlohmann::json;

// Decimal rendering at 17 significant digits: enough to round-trip any
// double exactly, few enough to be stable across libc versions. Throws
// on NaN and infinities; artifacts never contain non-finite numbers.
std::string format_double(double x);

// Serializes with sorted object keys and format_double for every float,
// so identical data always produces identical bytes. nlohmann's own
// dump() is avoided for numbers (shortest-round-trip output is not
// pinned by any standard).
std::string canonical_dump(const Json& j);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

// Polynomial files: {"dirichlet": {"6": [re, im], ...}} with decimal
// string keys, or {"polytorus": [{"nu": {"1": 2, "3": -1}, "c": [re,
// im]}, ...]}. Coefficients are [real, imaginary] pairs.
Json dirichlet_to_json(const DirichletPolynomial& f);
Json polytorus_to_json(const PolytorusPolynomial& F);
DirichletPolynomial dirichlet_from_json(const Json& j);
PolytorusPolynomial polytorus_from_json(const Json& j);

using AnyPolynomial = std::variant<DirichletPolynomial, PolytorusPolynomial>;

AnyPolynomial polynomial_from_text(const std::string& text);
AnyPolynomial load_polynomial(const std::string& path);
std::string polynomial_to_text(const AnyPolynomial& poly);
// Dirichlet inputs are lifted; polytorus inputs pass through.
PolytorusPolynomial as_polytorus(const AnyPolynomial& poly);

// Symbol descriptors, e.g. {"kind":"indicator","a":0,"b":2.5,
// "closed_right":true}. Kinds: constant, indicator, step_signs (seeded
// or with an explicit sign map), smooth (by name), tabulated.
MultiplierSymbol symbol_from_json(const Json& j);
MultiplierSymbol symbol_from_text(const std::string& text);
MultiplierSymbol load_symbol(const std::string& path);

Json norm_estimate_to_json(const NormEstimate& e);
Json marcinkiewicz_to_json(const MarcinkiewiczReport& r);
Json hormander_mihlin_to_json(const HormanderMihlinReport& r);
Json lower_bound_to_json(const LowerBoundReport& r);
Json lp_ratio_to_json(const LpRatioReport& r);
Json khintchine_to_json(const KhintchineEstimate& e);
Json transference_to_json(const TransferenceReport& r);
Json schauder_to_json(const SchauderCheck& c);

// {"error":{"code":N,"kind":"...","message":"..."}} in canonical bytes.
std::string error_to_text(int code, const std::string& kind,
                          const std::string& message);

}  // namespace bohr::io
