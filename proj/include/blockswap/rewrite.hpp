#pragma once

// Splices alternatives into the teacher graph to obtain the induced student network,
// and renders networks as Graphviz text.

#include <blockswap/errors.hpp>
#include <blockswap/graph.hpp>
#include <blockswap/json_io.hpp>
#include <blockswap/model_house.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace blockswap {

struct Provenance {
  std::string alternative_id;
  std::string source_network;
  Origin origin = Origin::teacher;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

using ProvenanceMap = std::map<std::string, Provenance>;  // student layer id -> origin

struct ReplaceResult {
  Network network;
  std::vector<std::string> inserted_ids;  // sorted
};

inline std::string namespace_prefix(std::size_t k) { return "alt" + std::to_string(k) + "/"; }

/// Smallest k such that no layer id in `net` starts with "alt<k>/".
inline std::size_t fresh_namespace(const Network& net) {
  std::set<std::size_t> used;
  for (const auto& l : net.layers()) {
    if (l.id.rfind("alt", 0) != 0) continue;
    auto slash = l.id.find('/');
    if (slash == std::string::npos || slash == 3) continue;
    auto digits = l.id.substr(3, slash - 3);
    if (std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }) && digits.size() < 10)
      used.insert(std::stoul(digits));
  }
  std::size_t k = 0;
  while (used.count(k)) ++k;
  return k;
}

/// Replaces `target`'s layers in `net` with the (masked) block of `alt`.
inline ReplaceResult replace_subnetwork(const Network& net, const SubNetwork& target, const Alternative& alt) {
  std::vector<std::size_t> members;
  for (const auto& id : target.layer_ids) {
    auto i = net.index_of(id);
    if (i == kNoLayer) throw TargetNotIntact("layer '" + id + "' of the target is missing");
    members.push_back(i);
  }
  auto check = check_siso(net, members);
  if (check.status != SisoStatus::ok) throw TargetNotIntact(check.reason);
  if (net.layer(check.input).id != target.input_layer || net.layer(check.output).id != target.output_layer ||
      net.layer(check.input).in_channels != target.in_channels ||
      net.layer(check.output).out_channels != target.out_channels || check.spatial_change != target.spatial_change)
    throw TargetNotIntact("boundary of the target region changed");

  if (!is_compatible(alt.subnet, target)) throw BoundaryMismatch("alternative '" + alt.id + "' is not compatible");
  const SubNetwork block = apply_mask(alt);
  if (block.in_channels != target.in_channels || block.out_channels != target.out_channels ||
      block.spatial_change != target.spatial_change)
    throw BoundaryMismatch("alternative '" + alt.id + "' has boundary " + std::to_string(block.in_channels) + "->" +
                           std::to_string(block.out_channels) + " but the target needs " +
                           std::to_string(target.in_channels) + "->" + std::to_string(target.out_channels));

  const std::set<std::string> removed(target.layer_ids.begin(), target.layer_ids.end());
  for (const auto& id : net.inputs())
    if (removed.count(id) && id != target.input_layer)
      throw TargetNotIntact("graph input '" + id + "' lies inside the target");
  for (const auto& id : net.outputs())
    if (removed.count(id) && id != target.output_layer)
      throw TargetNotIntact("graph output '" + id + "' lies inside the target");

  const auto prefix = namespace_prefix(fresh_namespace(net));
  auto rename = [&](const std::string& id) { return prefix + id; };

  std::vector<Layer> layers;
  for (const auto& l : net.layers())
    if (!removed.count(l.id)) layers.push_back(l);
  ReplaceResult res;
  for (auto l : block.layers) {
    l.id = rename(l.id);
    res.inserted_ids.push_back(l.id);
    layers.push_back(std::move(l));
  }

  const auto new_in = rename(block.input_layer);
  const auto new_out = rename(block.output_layer);
  std::set<Edge> edges;
  for (const auto& [s, d] : net.edges()) {
    const bool s_in = removed.count(s) > 0;
    const bool d_in = removed.count(d) > 0;
    if (!s_in && !d_in) edges.emplace(s, d);
    else if (!s_in && d_in) edges.emplace(s, new_in);    // single boundary input
    else if (s_in && !d_in) edges.emplace(new_out, d);  // fan-out kept
  }
  for (const auto& [s, d] : block.internal_edges) edges.emplace(rename(s), rename(d));

  auto inputs = net.inputs();
  for (auto& id : inputs)
    if (id == target.input_layer) id = new_in;
  auto outputs = net.outputs();
  for (auto& id : outputs)
    if (id == target.output_layer) id = new_out;

  res.network = Network(net.name(), std::move(layers), std::move(edges), std::move(inputs), std::move(outputs));
  return res;
}

struct RewriteResult {
  Network student;
  ProvenanceMap provenance;
};

/// Applies every plan member in teacher topological order of its target's entry layer.
inline RewriteResult apply_plan(const ModelHouse& house, const std::vector<std::string>& plan) {
  const auto topo = house.teacher.topological_order();
  if (!topo) throw InvalidNetwork("teacher graph has a cycle");
  std::vector<std::size_t> position(house.teacher.size());
  for (std::size_t i = 0; i < topo->size(); ++i) position[(*topo)[i]] = i;

  std::vector<const Alternative*> alts;
  std::set<std::string> occupied;
  for (const auto& id : plan) {
    const auto* a = house.find(id);
    if (!a) throw UnknownAlternative("'" + id + "' is not in the model house");
    for (const auto& l : house.target_of(*a).layer_ids)
      if (!occupied.insert(l).second) throw TargetNotIntact("plan is infeasible: layer '" + l + "' targeted twice");
    alts.push_back(a);
  }
  std::sort(alts.begin(), alts.end(), [&](const Alternative* x, const Alternative* y) {
    auto px = position[house.teacher.index_of(house.target_of(*x).input_layer)];
    auto py = position[house.teacher.index_of(house.target_of(*y).input_layer)];
    return px != py ? px < py : x->id < y->id;
  });

  RewriteResult res;
  res.student = house.teacher;
  for (const auto* a : alts) {
    auto step = replace_subnetwork(res.student, house.target_of(*a), *a);
    for (const auto& id : step.inserted_ids) res.provenance[id] = Provenance{a->id, a->subnet.source, a->origin};
    res.student = std::move(step.network);
  }
  return res;
}

inline Json provenance_to_json(const ProvenanceMap& prov) {
  Json out = Json::object();
  for (const auto& [id, p] : prov)
    out[id] = Json{{"alternative", p.alternative_id},
                   {"source_network", p.source_network},
                   {"origin", std::string(to_string(p.origin))}};
  return out;
}

inline ProvenanceMap provenance_from_json(const Json& j) {
  using namespace json_detail;
  if (!j.is_object()) throw SchemaViolation("$", "expected object");
  ProvenanceMap out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto path = "$." + it.key();
    Provenance p;
    p.alternative_id = as_string(field(it.value(), "alternative", path), path + ".alternative");
    p.source_network = as_string(field(it.value(), "source_network", path), path + ".source_network");
    auto o = parse_origin(as_string(field(it.value(), "origin", path), path + ".origin"));
    if (!o) throw SchemaViolation(path + ".origin", "unknown origin");
    p.origin = *o;
    out.emplace(it.key(), std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace dot_detail {

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline constexpr const char* kPalette[] = {"#8dd3c7", "#fdb462", "#bebada", "#fb8072", "#80b1d3",
                                           "#b3de69", "#fccde5", "#ffffb3", "#bc80bd", "#ccebc5"};

}  // namespace dot_detail

/// Graphviz text. Layers listed in `provenance` are filled with one color per source network.
inline std::string render_dot(const Network& net, const ProvenanceMap* provenance = nullptr) {
  using dot_detail::quote;
  std::map<std::string, std::size_t> color_of;
  if (provenance) {
    std::set<std::string> sources;
    for (const auto& [id, p] : *provenance) sources.insert(p.source_network);
    for (const auto& s : sources) color_of.emplace(s, color_of.size());
  }
  std::ostringstream os;
  os << "digraph " << quote(net.name()) << " {\n";
  os << "  node [shape=box, fontname=\"Helvetica\"];\n";
  for (const auto& l : net.layers()) {
    os << "  " << quote(l.id) << " [label="
       << quote(l.id + "\\n" + std::string(to_string(l.kind)) + " " + std::to_string(l.in_channels) + "->" +
                std::to_string(l.out_channels) + (l.spatial_change == Rational(1) ? "" : " x" + l.spatial_change.str()));
    if (provenance) {
      auto it = provenance->find(l.id);
      if (it != provenance->end()) {
        const auto n_colors = std::size(dot_detail::kPalette);
        os << ", style=filled, fillcolor=\"" << dot_detail::kPalette[color_of.at(it->second.source_network) % n_colors]
           << "\", origin=" << quote(it->second.source_network)
           << ", alternative=" << quote(it->second.alternative_id);
      }
    }
    os << "];\n";
  }
  for (const auto& [s, d] : net.edges()) os << "  " << quote(s) << " -> " << quote(d) << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace blockswap
