#ifndef TORIC_SPEC_IO_HPP
#define TORIC_SPEC_IO_HPP

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "toric/function_spec.hpp"

namespace toric {

using json = nlohmann::json;

namespace detail {

inline double number_or_inf(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInf;
  if (!j.is_number()) throw ParameterError("expected a number or \"inf\"");
  return j.get<double>();
}

inline json inf_or_number(double v) { return v == kInf ? json("inf") : json(v); }

inline std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) throw ParameterError(std::string(what) + ": expected an array");
  std::vector<double> v;
  for (const auto& e : j) {
    if (!e.is_number()) throw ParameterError(std::string(what) + ": expected numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

inline const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParameterError(std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace detail

/// Grid object: {"axes": [[...], ...], "shape": "box"} or
/// {"n": 1, "depth": 4, "epsilon": 1e-3, "size": 65, "shape": "box"}.
inline GridNd grid_from_json(const json& j) {
  if (!j.is_object()) throw ParameterError("grid: expected an object");
  const DomainShape shape = j.contains("shape") ? parse_shape(j["shape"].get<std::string>()) : DomainShape::box;
  if (j.contains("axes")) {
    std::vector<std::vector<double>> axes;
    for (const auto& a : j["axes"]) axes.push_back(detail::numbers(a, "grid axes"));
    return GridNd(std::move(axes), shape);
  }
  DomainSpec d;
  d.dimension = j.value("n", std::size_t(1));
  d.depth = j.value("depth", 4.0);
  d.boundary_margin = j.value("epsilon", 1e-3);
  d.shape = shape;
  return build_grid(d, j.value("size", std::size_t(65)));
}

inline json grid_to_json(const GridNd& g) {
  json axes = json::array();
  for (const auto& a : g.axes()) axes.push_back(a);
  return {{"axes", axes}, {"shape", to_string(g.shape())}};
}

inline FunctionSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw ParameterError("spec: expected an object");
  const std::string kind = detail::field(j, "kind").get<std::string>();
  if (kind == "linear") return FunctionSpec::linear(detail::numbers(detail::field(j, "lambda"), "lambda"));
  if (kind == "radial_power") return FunctionSpec::radial(detail::field(j, "alpha").get<double>());
  if (kind == "zero") return FunctionSpec::zero(j.value("n", std::size_t(1)));
  if (kind == "max_linear") {
    std::vector<std::vector<double>> pieces;
    for (const auto& p : detail::field(j, "pieces")) pieces.push_back(detail::numbers(p, "pieces"));
    std::vector<double> offsets;
    if (j.contains("offsets")) offsets = detail::numbers(j["offsets"], "offsets");
    return FunctionSpec::max_linear(std::move(pieces), std::move(offsets));
  }
  if (kind == "sum") {
    std::vector<FunctionSpec> terms;
    for (const auto& t : detail::field(j, "terms")) terms.push_back(spec_from_json(t));
    return FunctionSpec::sum(std::move(terms));
  }
  if (kind == "samples") {
    GridNd g = grid_from_json(detail::field(j, "grid"));
    const auto& vals = detail::field(j, "values");
    if (!vals.is_array()) throw ParameterError("samples: values must be an array");
    std::vector<ExtendedValue> v;
    for (const auto& e : vals) v.emplace_back(detail::number_or_inf(e));
    return FunctionSpec::samples(SampledFunction(std::move(g), std::move(v)));
  }
  throw ParameterError("spec: unknown kind '" + kind + "'");
}

inline json spec_to_json(const FunctionSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LinearSpec>) return {{"kind", "linear"}, {"lambda", s.lambda}};
        else if constexpr (std::is_same_v<T, RadialPowerSpec>) return {{"kind", "radial_power"}, {"alpha", s.alpha}};
        else if constexpr (std::is_same_v<T, MaxLinearSpec>)
          return {{"kind", "max_linear"}, {"pieces", s.pieces}, {"offsets", s.offsets}};
        else if constexpr (std::is_same_v<T, SumSpec>) {
          json terms = json::array();
          for (const auto& t : s.terms) terms.push_back(spec_to_json(t));
          return {{"kind", "sum"}, {"terms", terms}};
        } else {
          json vals = json::array();
          for (auto v : s.table->values()) vals.push_back(detail::inf_or_number(v.raw()));
          return {{"kind", "samples"}, {"grid", grid_to_json(s.table->grid())}, {"values", vals}};
        }
      },
      spec.variant());
}

/// Parses JSON text; syntax errors carry the 1-based line and column.
inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(e.what(), line, col);
  }
}

inline FunctionSpec parse_spec(const std::string& text) {
  const json j = parse_json_text(text);
  try {
    return spec_from_json(j);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("spec: ") + e.what());
  }
}

inline FunctionSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

}  // namespace toric

#endif  // TORIC_SPEC_IO_HPP
