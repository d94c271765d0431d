#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "bohr/json_io.hpp"
#include "bohr/norms.hpp"
#include "bohr/polynomials.hpp"
#include "doctest.h"

using namespace bohr;
using bohr::io::Json;

namespace {

// Independent formatting oracle: the only contract that matters is that
// the emitted decimal parses back to the identical double.
bool round_trips(double x) {
  const std::string s = io::format_double(x);
  const double back = std::strtod(s.c_str(), nullptr);
  return back == x && std::signbit(back) == std::signbit(x);
}

DirichletPolynomial fixture_dirichlet() {
  return DirichletPolynomial::from_terms(
      {{1, {1.0, 0.0}}, {2, {2.0, 0.0}}, {6, {0.5, -0.25}}});
}

PolytorusPolynomial fixture_polytorus() {
  return PolytorusPolynomial::from_terms(
      {{MultiIndex::from_entries({{1, 2}, {3, -1}}), {0.5, -0.25}},
       {MultiIndex::from_entries({{2, 4}}), {1.0, 3.0}},
       {MultiIndex{}, {-1.0, 0.0}}});
}

bool same_terms(const PolytorusPolynomial& a, const PolytorusPolynomial& b) {
  if (a.terms().size() != b.terms().size()) return false;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    if (!(a.terms()[i].first == b.terms()[i].first)) return false;
    if (a.terms()[i].second != b.terms()[i].second) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("double formatting round-trips exactly and rejects non-finite") {
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(2.0) == "2");
  CHECK(io::format_double(1.0 / 3.0) == "0.33333333333333331");
  CHECK(io::format_double(std::sqrt(5.0)) == "2.2360679774997898");
  CHECK(io::format_double(1e300) == "1.0000000000000001e+300");
  CHECK(io::format_double(-0.0) == "-0");

  CHECK(round_trips(std::sqrt(5.0)));
  CHECK(round_trips(1.0 / 3.0));
  CHECK(round_trips(-0.0));
  CHECK(round_trips(std::numeric_limits<double>::max()));
  CHECK(round_trips(std::numeric_limits<double>::denorm_min()));
  CHECK(round_trips(4.9406564584124654e-324));

  CHECK_THROWS_AS(io::format_double(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(io::format_double(std::nan("")), std::invalid_argument);
}

TEST_CASE("canonical dump sorts keys, pins floats, and is idempotent") {
  Json j;
  j["b"] = 1;
  j["a"] = Json::array({0.5, true, nullptr, "x\"y\n"});
  j["c"] = Json{{"zz", 1.0 / 3.0}, {"aa", -2}};
  const std::string bytes = io::canonical_dump(j);
  CHECK(bytes ==
        "{\"a\":[0.5,true,null,\"x\\\"y\\n\"],"
        "\"b\":1,"
        "\"c\":{\"aa\":-2,\"zz\":0.33333333333333331}}");

  // Reparse and dump again: bytes are a fixed point.
  CHECK(io::canonical_dump(Json::parse(bytes)) == bytes);

  // A float that prints without a decimal point reparses as an integer
  // with the same bytes, so idempotence survives the type flip.
  Json f;
  f["v"] = 2.0;
  const std::string fb = io::canonical_dump(f);
  CHECK(fb == "{\"v\":2}");
  CHECK(io::canonical_dump(Json::parse(fb)) == fb);

  Json poisoned;
  poisoned["v"] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(io::canonical_dump(poisoned), std::invalid_argument);
}

TEST_CASE("dirichlet polynomial files round-trip bitwise") {
  const auto f = fixture_dirichlet();
  const std::string text = io::polynomial_to_text(io::AnyPolynomial{f});
  CHECK(text ==
        "{\"dirichlet\":{\"1\":[1,0],\"2\":[2,0],\"6\":[0.5,-0.25]}}");

  const auto parsed = io::polynomial_from_text(text);
  REQUIRE(std::holds_alternative<DirichletPolynomial>(parsed));
  const auto& g = std::get<DirichletPolynomial>(parsed);
  REQUIRE(g.terms().size() == f.terms().size());
  for (std::size_t i = 0; i < f.terms().size(); ++i) {
    CHECK(g.terms()[i].first == f.terms()[i].first);
    CHECK(g.terms()[i].second == f.terms()[i].second);
  }

  // Keys sort as strings: "10" lands before "2". The parse does not care
  // about the order, only the writer's bytes do.
  const auto h = DirichletPolynomial::from_terms({{2, {1.0, 0.0}},
                                                  {10, {1.0, 0.0}}});
  CHECK(io::polynomial_to_text(io::AnyPolynomial{h}) ==
        "{\"dirichlet\":{\"10\":[1,0],\"2\":[1,0]}}");
}

TEST_CASE("polytorus polynomial files round-trip bitwise") {
  const auto F = fixture_polytorus();
  const std::string text = io::polynomial_to_text(io::AnyPolynomial{F});
  const auto parsed = io::polynomial_from_text(text);
  REQUIRE(std::holds_alternative<PolytorusPolynomial>(parsed));
  CHECK(same_terms(std::get<PolytorusPolynomial>(parsed), F));

  // The documented file shape, written by hand.
  const auto manual = io::polynomial_from_text(
      R"({"polytorus": [{"nu": {"1": 2, "3": -1}, "c": [0.5, -0.25]}]})");
  const auto& M = std::get<PolytorusPolynomial>(manual);
  REQUIRE(M.terms().size() == 1);
  CHECK(M.terms()[0].first == MultiIndex::from_entries({{1, 2}, {3, -1}}));
  CHECK(M.terms()[0].second == Coeff{0.5, -0.25});

  // Unordered nu keys and duplicate frequencies normalize on parse.
  const auto merged = io::polynomial_from_text(
      R"({"polytorus": [{"nu": {"2": 1}, "c": [1, 0]},
                        {"nu": {"2": 1}, "c": [0, 1]}]})");
  const auto& G = std::get<PolytorusPolynomial>(merged);
  REQUIRE(G.terms().size() == 1);
  CHECK(G.terms()[0].second == Coeff{1.0, 1.0});
}

TEST_CASE("lifting a parsed dirichlet file matches the direct lift") {
  const auto f = fixture_dirichlet();
  const auto parsed =
      io::polynomial_from_text(io::polynomial_to_text(io::AnyPolynomial{f}));
  const auto lifted = io::as_polytorus(parsed);
  CHECK(same_terms(lifted, bohr_lift(f)));
  // And the polytorus branch passes through untouched.
  CHECK(same_terms(io::as_polytorus(io::AnyPolynomial{fixture_polytorus()}),
                   fixture_polytorus()));
}

TEST_CASE("malformed polynomial files are rejected") {
  CHECK_THROWS_AS(io::polynomial_from_text("{}"), std::invalid_argument);
  CHECK_THROWS_AS(io::polynomial_from_text(R"({"fourier": {}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      io::polynomial_from_text(R"({"dirichlet": {}, "polytorus": []})"),
      std::invalid_argument);
  CHECK_THROWS_AS(io::polynomial_from_text(R"({"dirichlet": {"0": [1, 0]}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(io::polynomial_from_text(R"({"dirichlet": {"2x": [1, 0]}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(io::polynomial_from_text(R"({"dirichlet": {"2": [1]}})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      io::polynomial_from_text(R"({"polytorus": [{"nu": {"1": 1.5}, "c": [1, 0]}]})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      io::polynomial_from_text(R"({"polytorus": [{"nu": {"0": 1}, "c": [1, 0]}]})"),
      std::invalid_argument);
  CHECK_THROWS_AS(io::polynomial_from_text(R"({"polytorus": [{"c": [1, 0]}]})"),
                  std::invalid_argument);
  CHECK_THROWS(io::polynomial_from_text("not json at all"));
}

TEST_CASE("symbol descriptors build every kind") {
  const auto ind = io::symbol_from_text(
      R"({"kind":"indicator","a":0,"b":2.5,"closed_right":true})");
  CHECK(ind.kind() == MultiplierSymbol::Kind::indicator);
  CHECK(ind.at_rational(ReducedRational{2, 1}) == Coeff{1.0, 0.0});
  CHECK(ind.at_rational(ReducedRational{3, 1}) == Coeff{0.0, 0.0});
  CHECK(ind.at_rational(ReducedRational{5, 2}) == Coeff{1.0, 0.0});

  const auto cnum = io::symbol_from_text(R"({"kind":"constant","value":3})");
  CHECK(cnum.at_real(7.0) == Coeff{3.0, 0.0});
  const auto cpair =
      io::symbol_from_text(R"({"kind":"constant","value":[0.5,-1]})");
  CHECK(cpair.at_real(7.0) == Coeff{0.5, -1.0});

  const auto seeded = io::symbol_from_text(
      R"({"kind":"step_signs","eta":"3/2","seed":7})");
  const auto oracle =
      MultiplierSymbol::step_signs_seeded(IntervalPartition::parse("3/2"), 7);
  for (long long k = -5; k <= 5; ++k) {
    CHECK(seeded.step_sign(k) == oracle.step_sign(k));
  }

  const auto expl = io::symbol_from_text(
      R"({"kind":"step_signs","eta":2,"signs":{"-2":-1,"0":1,"3":-1},"default":1})");
  CHECK(expl.step_sign(-2) == -1);
  CHECK(expl.step_sign(0) == 1);
  CHECK(expl.step_sign(3) == -1);
  CHECK(expl.step_sign(17) == 1);

  const auto sm = io::symbol_from_text(R"({"kind":"smooth","name":"inv1p"})");
  CHECK(sm.at_real(1.0) == Coeff{0.5, 0.0});

  const auto tab = io::symbol_from_text(
      R"({"kind":"tabulated","nodes":[[1,[0,0]],[2.5,[1,0]]],"monotone":true})");
  CHECK(tab.at_real(0.5) == Coeff{0.0, 0.0});
  CHECK(tab.at_real(3.0) == Coeff{1.0, 0.0});
  CHECK(tab.tabulated_monotone());
}

TEST_CASE("malformed symbol descriptors are rejected") {
  CHECK_THROWS_AS(io::symbol_from_text(R"({"kind":"mystery"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(io::symbol_from_text(R"({"a":0,"b":1})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(io::symbol_from_text(R"({"kind":"indicator","a":0})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(io::symbol_from_text(R"({"kind":"step_signs","eta":"3/2"})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(io::symbol_from_text(R"({"kind":"smooth","name":7})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      io::symbol_from_text(R"({"kind":"tabulated","nodes":[[1]]})"),
      std::invalid_argument);
}

TEST_CASE("norm estimates serialize with an exact numeric round-trip") {
  const auto f = DirichletPolynomial::from_terms({{1, {1.0, 0.0}},
                                                  {2, {2.0, 0.0}}});
  const auto est = norm_parseval(f);
  const Json j = io::norm_estimate_to_json(est);
  const Json back = Json::parse(io::canonical_dump(j));
  CHECK(back["value"].get<double>() == est.value);
  CHECK(back["p"].get<double>() == 2.0);
  CHECK(back["method"].get<std::string>() == "parseval");
  CHECK(back["sampled"].get<bool>() == false);
  CHECK(back.find("trace") == back.end());

  GridOptions opts;
  opts.parallel = false;
  const auto grid = norm_grid(bohr_lift(f), 4.0, opts);
  const Json gj = io::norm_estimate_to_json(grid);
  REQUIRE(gj.contains("trace"));
  REQUIRE(gj["trace"].size() == grid.trace.size());
  const Json gback = Json::parse(io::canonical_dump(gj));
  for (std::size_t i = 0; i < grid.trace.size(); ++i) {
    CHECK(gback["trace"][i]["value"].get<double>() == grid.trace[i].value);
    CHECK(gback["trace"][i]["parameter"].get<double>() ==
          grid.trace[i].parameter);
  }
}

TEST_CASE("report serializers carry every field through canonical bytes") {
  TransferenceReport r;
  r.sup_gap = 1.0 / 3.0;
  r.approx_norm = std::sqrt(5.0);
  r.exact_norm = 2.25;
  r.f_norm = 1.0;
  r.reference = 4.5;
  r.epsilon = 1e-3;
  r.gamma = 2.0;
  r.Q = 10;
  r.N = -1;
  r.passed = true;
  const Json back = Json::parse(io::canonical_dump(io::transference_to_json(r)));
  CHECK(back["sup_gap"].get<double>() == r.sup_gap);
  CHECK(back["approx_norm"].get<double>() == r.approx_norm);
  CHECK(back["Q"].get<std::int64_t>() == 10);
  CHECK(back["N"].get<std::int64_t>() == -1);
  CHECK(back["passed"].get<bool>());

  SchauderCheck c;
  c.passed = true;
  c.max_deviation = 0.0;
  const Json cj = io::schauder_to_json(c);
  CHECK(io::canonical_dump(cj) == "{\"max_deviation\":0,\"passed\":true}");

  const std::string err = io::error_to_text(3, "unattainable-tolerance", "no Q");
  CHECK(err ==
        "{\"error\":{\"code\":3,\"kind\":\"unattainable-tolerance\","
        "\"message\":\"no Q\"}}");
}

TEST_CASE("file io round-trips bytes and reports missing paths") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = (dir / "bohrlift_io_test.json").string();
  const std::string payload =
      io::polynomial_to_text(io::AnyPolynomial{fixture_dirichlet()});
  io::write_file(path, payload);
  CHECK(io::read_file(path) == payload);
  const auto loaded = io::load_polynomial(path);
  CHECK(std::holds_alternative<DirichletPolynomial>(loaded));
  std::filesystem::remove(path);

  CHECK_THROWS_AS(io::read_file((dir / "bohrlift_io_absent.json").string()),
                  std::runtime_error);
}
