#pragma once

// Canonical JSON encoding of the graph IR plus small schema-checking helpers
// shared by the other document formats.

#include <blockswap/errors.hpp>
#include <blockswap/graph.hpp>
#include <blockswap/rational.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace blockswap {

using Json = nlohmann::json;  // std::map-backed: keys serialize sorted

namespace json_detail {

inline const Json& field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaViolation(path, "expected object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaViolation(path + "." + key, "missing required field");
  return *it;
}

inline std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaViolation(path, "expected string");
  return j.get<std::string>();
}

inline std::int64_t as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaViolation(path, "expected integer");
  return j.get<std::int64_t>();
}

inline bool as_bool(const Json& j, const std::string& path) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer() && (j.get<std::int64_t>() == 0 || j.get<std::int64_t>() == 1))
    return j.get<std::int64_t>() == 1;
  throw SchemaViolation(path, "expected boolean or 0/1");
}

inline Rational as_rational(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) throw SchemaViolation(path, "expected rational string \"p/q\"");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw SchemaViolation(path, e.what());
  }
}

inline const Json& as_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaViolation(path, "expected array");
  return j;
}

inline std::vector<std::string> as_string_list(const Json& j, const std::string& path) {
  as_array(j, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_string(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace json_detail

inline Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw MalformedDocument(e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedDocument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Canonical text: sorted keys, two-space indent, trailing newline.
inline std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

inline Json cost_to_json(const CostVector& c) {
  Json lat = Json::object();
  for (const auto& [dev, v] : c.latency_us) lat[dev] = v.str();
  return Json{{"flops", c.flops}, {"params", c.params}, {"latency_us", lat}};
}

inline CostVector cost_from_json(const Json& j, const std::string& path) {
  using namespace json_detail;
  CostVector c;
  c.flops = as_int(field(j, "flops", path), path + ".flops");
  c.params = as_int(field(j, "params", path), path + ".params");
  if (j.contains("latency_us")) {
    const auto& lat = j.at("latency_us");
    if (!lat.is_object()) throw SchemaViolation(path + ".latency_us", "expected object");
    for (auto it = lat.begin(); it != lat.end(); ++it)
      c.latency_us[it.key()] = as_rational(it.value(), path + ".latency_us." + it.key());
  }
  return c;
}

inline Json layer_to_json(const Layer& l) {
  return Json{{"id", l.id},
              {"kind", std::string(to_string(l.kind))},
              {"in_channels", l.in_channels},
              {"out_channels", l.out_channels},
              {"spatial_change", Json{{"num", l.spatial_change.numerator()}, {"den", l.spatial_change.denominator()}}},
              {"cost", cost_to_json(l.cost)}};
}

inline Layer layer_from_json(const Json& j, const std::string& path) {
  using namespace json_detail;
  Layer l;
  l.id = as_string(field(j, "id", path), path + ".id");
  auto kind = as_string(field(j, "kind", path), path + ".kind");
  auto k = parse_layer_kind(kind);
  if (!k) throw SchemaViolation(path + ".kind", "unknown layer kind '" + kind + "'");
  l.kind = *k;
  l.in_channels = as_int(field(j, "in_channels", path), path + ".in_channels");
  l.out_channels = as_int(field(j, "out_channels", path), path + ".out_channels");
  const auto& sc = field(j, "spatial_change", path);
  auto num = as_int(field(sc, "num", path + ".spatial_change"), path + ".spatial_change.num");
  auto den = as_int(field(sc, "den", path + ".spatial_change"), path + ".spatial_change.den");
  if (num < 1 || den < 1) throw SchemaViolation(path + ".spatial_change", "num and den must be >= 1");
  l.spatial_change = Rational(num, den);
  l.cost = cost_from_json(field(j, "cost", path), path + ".cost");
  return l;
}

inline Json edges_to_json(const std::vector<Edge>& edges) {
  Json out = Json::array();
  for (const auto& [s, d] : edges) out.push_back(Json::array({s, d}));
  return out;
}

inline std::vector<Edge> edges_from_json(const Json& j, const std::string& path) {
  using namespace json_detail;
  as_array(j, path);
  std::vector<Edge> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto p = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 2) throw SchemaViolation(p, "expected [src, dst]");
    out.emplace_back(as_string(j[i][0], p + "[0]"), as_string(j[i][1], p + "[1]"));
  }
  return out;
}

inline Json network_to_json(const Network& net) {
  Json layers = Json::array();
  for (const auto& l : net.layers()) layers.push_back(layer_to_json(l));
  return Json{{"name", net.name()},
              {"layers", layers},
              {"edges", edges_to_json({net.edges().begin(), net.edges().end()})},
              {"inputs", net.inputs()},
              {"outputs", net.outputs()}};
}

inline Network network_from_json(const Json& j, const std::string& path = "$") {
  using namespace json_detail;
  if (!j.is_object()) throw SchemaViolation(path, "expected object");
  auto name = as_string(field(j, "name", path), path + ".name");
  const auto& jl = as_array(field(j, "layers", path), path + ".layers");
  std::vector<Layer> layers;
  for (std::size_t i = 0; i < jl.size(); ++i) layers.push_back(layer_from_json(jl[i], path + ".layers[" + std::to_string(i) + "]"));
  auto edge_list = edges_from_json(field(j, "edges", path), path + ".edges");
  auto inputs = as_string_list(field(j, "inputs", path), path + ".inputs");
  auto outputs = as_string_list(field(j, "outputs", path), path + ".outputs");
  try {
    return Network(name, std::move(layers), std::set<Edge>(edge_list.begin(), edge_list.end()), std::move(inputs),
                   std::move(outputs));
  } catch (const InvalidNetwork& e) {
    throw SchemaViolation(path + ".layers", e.what());
  }
}

inline std::string serialize_network(const Network& net) { return dump_canonical(network_to_json(net)); }

inline Network parse_network(std::string_view text) { return network_from_json(parse_json_text(text)); }

inline Network load_network(const std::string& path) { return parse_network(read_file(path)); }

}  // namespace blockswap
