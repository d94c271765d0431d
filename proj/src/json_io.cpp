#include "bohr/json_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bohr::io {

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw std::invalid_argument(what);
}

// Strict decimal parse of a full string, used for object keys.
template <typename Int>
Int parse_key(const std::string& key, const char* what) {
  Int value{};
  const char* first = key.data();
  const char* last = first + key.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || key.empty()) {
    bad(std::string(what) + ": bad decimal key \"" + key + "\"");
  }
  return value;
}

double number_of(const Json& j, const std::string& where) {
  if (!j.is_number()) bad(where + ": expected a number");
  return j.get<double>();
}

std::int64_t integer_of(const Json& j, const std::string& where) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    bad(where + ": expected an integer");
  }
  return j.get<std::int64_t>();
}

// Coefficients are [real, imaginary]; a bare number means a real value.
Coeff coeff_of(const Json& j, const std::string& where) {
  if (j.is_number()) return Coeff{j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) {
    bad(where + ": coefficient must be [re, im]");
  }
  return Coeff{number_of(j[0], where), number_of(j[1], where)};
}

Json coeff_json(const Coeff& c) {
  return Json::array({c.real(), c.imag()});
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) bad(where + ": missing \"" + key + "\"");
  return *it;
}

void dump_rec(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.cbegin(); it != j.cend(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();  // nlohmann handles string escaping
        out += ':';
        dump_rec(it.value(), out);
      }
      out += '}';
      return;
    }
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        dump_rec(v, out);
      }
      out += ']';
      return;
    }
    case Json::value_t::string:
      out += j.dump();
      return;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      return;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      return;
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    case Json::value_t::null:
      out += "null";
      return;
    default:
      bad("canonical_dump: unsupported value type");
  }
}

Json trace_json(const std::vector<NormTracePoint>& trace) {
  Json rows = Json::array();
  for (const auto& pt : trace) {
    rows.push_back(Json{{"parameter", pt.parameter}, {"value", pt.value}});
  }
  return rows;
}

}  // namespace

std::string format_double(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("format_double: non-finite value");
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string canonical_dump(const Json& j) {
  std::string out;
  dump_rec(j, out);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

Json dirichlet_to_json(const DirichletPolynomial& f) {
  Json body = Json::object();
  for (const auto& [n, c] : f.terms()) {
    body[std::to_string(n)] = coeff_json(c);
  }
  return Json{{"dirichlet", std::move(body)}};
}

Json polytorus_to_json(const PolytorusPolynomial& F) {
  Json rows = Json::array();
  for (const auto& [nu, c] : F.terms()) {
    Json exps = Json::object();
    for (const auto& [axis, e] : nu.entries()) {
      exps[std::to_string(axis)] = e;
    }
    rows.push_back(Json{{"nu", std::move(exps)}, {"c", coeff_json(c)}});
  }
  return Json{{"polytorus", std::move(rows)}};
}

DirichletPolynomial dirichlet_from_json(const Json& j) {
  if (!j.is_object()) bad("dirichlet: expected an object of index -> [re, im]");
  std::vector<DirichletPolynomial::Term> terms;
  terms.reserve(j.size());
  for (auto it = j.cbegin(); it != j.cend(); ++it) {
    const auto n = parse_key<std::uint64_t>(it.key(), "dirichlet");
    if (n == 0) bad("dirichlet: index 0 is not a frequency");
    terms.emplace_back(n, coeff_of(it.value(), "dirichlet[" + it.key() + "]"));
  }
  return DirichletPolynomial::from_terms(std::move(terms));
}

PolytorusPolynomial polytorus_from_json(const Json& j) {
  if (!j.is_array()) bad("polytorus: expected an array of terms");
  std::vector<PolytorusPolynomial::Term> terms;
  terms.reserve(j.size());
  for (const auto& row : j) {
    if (!row.is_object()) bad("polytorus: each term must be an object");
    const Json& exps = field(row, "nu", "polytorus term");
    if (!exps.is_object()) bad("polytorus: \"nu\" must be an object");
    std::vector<MultiIndex::Entry> entries;
    entries.reserve(exps.size());
    for (auto it = exps.cbegin(); it != exps.cend(); ++it) {
      const auto axis = parse_key<std::int32_t>(it.key(), "polytorus nu");
      entries.emplace_back(axis,
                           integer_of(it.value(), "polytorus nu exponent"));
    }
    terms.emplace_back(MultiIndex::from_entries(std::move(entries)),
                       coeff_of(field(row, "c", "polytorus term"), "polytorus c"));
  }
  return PolytorusPolynomial::from_terms(std::move(terms));
}

AnyPolynomial polynomial_from_text(const std::string& text) {
  const Json j = Json::parse(text);
  if (!j.is_object() || j.size() != 1) {
    bad("polynomial file: expected exactly one of \"dirichlet\", \"polytorus\"");
  }
  if (auto it = j.find("dirichlet"); it != j.end()) {
    return dirichlet_from_json(*it);
  }
  if (auto it = j.find("polytorus"); it != j.end()) {
    return polytorus_from_json(*it);
  }
  bad("polynomial file: expected exactly one of \"dirichlet\", \"polytorus\"");
}

AnyPolynomial load_polynomial(const std::string& path) {
  return polynomial_from_text(read_file(path));
}

std::string polynomial_to_text(const AnyPolynomial& poly) {
  const Json j = std::holds_alternative<DirichletPolynomial>(poly)
                     ? dirichlet_to_json(std::get<DirichletPolynomial>(poly))
                     : polytorus_to_json(std::get<PolytorusPolynomial>(poly));
  return canonical_dump(j);
}

PolytorusPolynomial as_polytorus(const AnyPolynomial& poly) {
  if (std::holds_alternative<PolytorusPolynomial>(poly)) {
    return std::get<PolytorusPolynomial>(poly);
  }
  return bohr_lift(std::get<DirichletPolynomial>(poly));
}

MultiplierSymbol symbol_from_json(const Json& j) {
  if (!j.is_object()) bad("symbol: expected an object");
  const Json& kind_node = field(j, "kind", "symbol");
  if (!kind_node.is_string()) bad("symbol: \"kind\" must be a string");
  const auto kind = kind_node.get<std::string>();

  if (kind == "constant") {
    return MultiplierSymbol::constant(
        coeff_of(field(j, "value", "constant symbol"), "constant value"));
  }
  if (kind == "indicator") {
    const double a = number_of(field(j, "a", "indicator symbol"), "indicator a");
    const double b = number_of(field(j, "b", "indicator symbol"), "indicator b");
    const bool closed_left = j.value("closed_left", false);
    const bool closed_right = j.value("closed_right", true);
    return MultiplierSymbol::indicator(a, b, closed_left, closed_right);
  }
  if (kind == "step_signs") {
    const Json& eta = field(j, "eta", "step_signs symbol");
    const std::string eta_text = eta.is_string()
                                     ? eta.get<std::string>()
                                     : format_double(number_of(eta, "eta"));
    auto partition = IntervalPartition::parse(eta_text);
    if (auto it = j.find("signs"); it != j.end()) {
      if (!it->is_object()) bad("step_signs: \"signs\" must be an object");
      std::map<long long, int> signs;
      for (auto s = it->cbegin(); s != it->cend(); ++s) {
        signs[parse_key<long long>(s.key(), "step_signs")] =
            static_cast<int>(integer_of(s.value(), "step_signs sign"));
      }
      const int fallback =
          static_cast<int>(j.value("default", static_cast<std::int64_t>(1)));
      return MultiplierSymbol::step_signs_explicit(std::move(partition),
                                                   std::move(signs), fallback);
    }
    const auto seed = static_cast<std::uint64_t>(
        integer_of(field(j, "seed", "step_signs symbol"), "step_signs seed"));
    return MultiplierSymbol::step_signs_seeded(std::move(partition), seed);
  }
  if (kind == "smooth") {
    const Json& name = field(j, "name", "smooth symbol");
    if (!name.is_string()) bad("smooth symbol: \"name\" must be a string");
    return MultiplierSymbol::named_smooth(name.get<std::string>());
  }
  if (kind == "tabulated") {
    const Json& nodes = field(j, "nodes", "tabulated symbol");
    if (!nodes.is_array()) bad("tabulated symbol: \"nodes\" must be an array");
    std::vector<std::pair<double, Coeff>> parsed;
    parsed.reserve(nodes.size());
    for (const auto& node : nodes) {
      if (!node.is_array() || node.size() != 2) {
        bad("tabulated symbol: each node must be [t, coefficient]");
      }
      parsed.emplace_back(number_of(node[0], "tabulated node t"),
                          coeff_of(node[1], "tabulated node value"));
    }
    return MultiplierSymbol::tabulated(std::move(parsed),
                                       j.value("monotone", false));
  }
  bad("symbol: unknown kind \"" + kind + "\"");
}

MultiplierSymbol symbol_from_text(const std::string& text) {
  return symbol_from_json(Json::parse(text));
}

MultiplierSymbol load_symbol(const std::string& path) {
  return symbol_from_text(read_file(path));
}

Json norm_estimate_to_json(const NormEstimate& e) {
  Json j{{"value", e.value},
         {"p", e.p},
         {"method", to_string(e.method)},
         {"quasi_norm", e.quasi_norm},
         {"sampled", e.sampled},
         {"std_error", e.std_error},
         {"last_delta", e.last_delta}};
  if (!e.trace.empty()) j["trace"] = trace_json(e.trace);
  return j;
}

Json marcinkiewicz_to_json(const MarcinkiewiczReport& r) {
  Json rows = Json::array();
  for (const auto& iv : r.per_interval) {
    rows.push_back(Json{{"k", iv.k}, {"variation", iv.variation}});
  }
  return Json{{"sup_norm", r.sup_norm},
              {"bv_sup", r.bv_sup},
              {"bracket", r.bracket},
              {"argmax_k", r.argmax_k},
              {"tail_justified", r.tail_justified},
              {"per_interval", std::move(rows)}};
}

Json hormander_mihlin_to_json(const HormanderMihlinReport& r) {
  return Json{{"sup_norm", r.sup_norm},
              {"derivative_term", r.derivative_term},
              {"bracket", r.bracket},
              {"argmax_t", r.argmax_t},
              {"unbounded_suspected", r.unbounded_suspected}};
}

Json lower_bound_to_json(const LowerBoundReport& r) {
  return Json{{"value", r.value},
              {"argmax_member", r.argmax_member},
              {"ratios", r.ratios}};
}

Json lp_ratio_to_json(const LpRatioReport& r) {
  return Json{{"ratio", r.ratio},
              {"block_count", r.block_count},
              {"exploratory", r.exploratory},
              {"s_norm", norm_estimate_to_json(r.s_norm)},
              {"f_norm", norm_estimate_to_json(r.f_norm)}};
}

Json khintchine_to_json(const KhintchineEstimate& e) {
  return Json{{"mean_pow", e.mean_pow},
              {"std_error", e.std_error},
              {"samples", e.samples}};
}

Json transference_to_json(const TransferenceReport& r) {
  return Json{{"sup_gap", r.sup_gap},   {"approx_norm", r.approx_norm},
              {"exact_norm", r.exact_norm}, {"f_norm", r.f_norm},
              {"reference", r.reference},   {"epsilon", r.epsilon},
              {"gamma", r.gamma},           {"Q", r.Q},
              {"N", r.N},                   {"passed", r.passed}};
}

Json schauder_to_json(const SchauderCheck& c) {
  return Json{{"passed", c.passed}, {"max_deviation", c.max_deviation}};
}

std::string error_to_text(int code, const std::string& kind,
                          const std::string& message) {
  return canonical_dump(Json{
      {"error", Json{{"code", code}, {"kind", kind}, {"message", message}}}});
}

}  // namespace bohr::io
