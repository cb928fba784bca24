#pragma once

// Neutral computation-graph IR: layers with channel/stride/cost attributes,
// structural validation, and single-input/single-output sub-network extraction.

#include <blockswap/errors.hpp>
#include <blockswap/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace blockswap {

enum class LayerKind { conv, dwconv, dense, pool, act, bn, add, mul, concat, input, output, other };

inline constexpr std::string_view kLayerKindNames[] = {"conv", "dwconv", "dense", "pool", "act",   "bn",
                                                       "add",  "mul",    "concat", "input", "output", "other"};

inline std::string_view to_string(LayerKind kind) { return kLayerKindNames[static_cast<int>(kind)]; }

inline std::optional<LayerKind> parse_layer_kind(std::string_view name) {
  for (int i = 0; i < static_cast<int>(std::size(kLayerKindNames)); ++i)
    if (kLayerKindNames[i] == name) return static_cast<LayerKind>(i);
  return std::nullopt;
}

struct CostVector {
  std::int64_t flops = 0;
  std::int64_t params = 0;
  std::map<std::string, Rational> latency_us;  // device -> microseconds

  CostVector& operator+=(const CostVector& o) {
    flops += o.flops;
    params += o.params;
    for (const auto& [dev, v] : o.latency_us) latency_us[dev] += v;
    return *this;
  }
  friend CostVector operator+(CostVector a, const CostVector& b) { return a += b; }
  friend bool operator==(const CostVector&, const CostVector&) = default;
};

struct Layer {
  std::string id;
  LayerKind kind = LayerKind::other;
  std::int64_t in_channels = 1;
  std::int64_t out_channels = 1;
  Rational spatial_change{1};  // output size / input size, e.g. 1/2 for stride 2
  CostVector cost;

  friend bool operator==(const Layer&, const Layer&) = default;
};

using Edge = std::pair<std::string, std::string>;

inline constexpr std::size_t kNoLayer = static_cast<std::size_t>(-1);

/// Immutable DAG of layers. Layers are kept sorted by id; index i refers to layers()[i].
/// Edges whose endpoints are unknown are retained verbatim (validate_network reports
/// them) but do not take part in adjacency.
class Network {
 public:
  Network() = default;

  Network(std::string name, std::vector<Layer> layers, std::set<Edge> edges, std::vector<std::string> inputs,
          std::vector<std::string> outputs)
      : name_(std::move(name)), layers_(std::move(layers)), edges_(std::move(edges)),
        inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
    std::sort(layers_.begin(), layers_.end(), [](const Layer& a, const Layer& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      if (i > 0 && layers_[i].id == layers_[i - 1].id)
        throw InvalidNetwork("duplicate layer id '" + layers_[i].id + "'");
      index_.emplace(layers_[i].id, i);
    }
    std::sort(inputs_.begin(), inputs_.end());
    inputs_.erase(std::unique(inputs_.begin(), inputs_.end()), inputs_.end());
    std::sort(outputs_.begin(), outputs_.end());
    outputs_.erase(std::unique(outputs_.begin(), outputs_.end()), outputs_.end());
    succ_.assign(layers_.size(), {});
    pred_.assign(layers_.size(), {});
    for (const auto& [src, dst] : edges_) {
      auto s = index_of(src);
      auto d = index_of(dst);
      if (s == kNoLayer || d == kNoLayer) continue;
      succ_[s].push_back(d);
      pred_[d].push_back(s);
    }
    for (auto& v : succ_) std::sort(v.begin(), v.end());
    for (auto& v : pred_) std::sort(v.begin(), v.end());
  }

  const std::string& name() const { return name_; }
  const std::vector<Layer>& layers() const { return layers_; }
  const std::set<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& inputs() const { return inputs_; }
  const std::vector<std::string>& outputs() const { return outputs_; }
  std::size_t size() const { return layers_.size(); }

  std::size_t index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? kNoLayer : it->second;
  }
  bool has_layer(std::string_view id) const { return index_of(id) != kNoLayer; }
  const Layer& layer(std::size_t i) const { return layers_.at(i); }
  const Layer& layer(std::string_view id) const {
    auto i = index_of(id);
    if (i == kNoLayer) throw InvalidNetwork("unknown layer '" + std::string(id) + "'");
    return layers_[i];
  }

  /// Neighbor lists, sorted by layer id.
  const std::vector<std::size_t>& successors(std::size_t i) const { return succ_.at(i); }
  const std::vector<std::size_t>& predecessors(std::size_t i) const { return pred_.at(i); }

  /// Kahn's algorithm with the lexicographically smallest ready id first; nullopt on a cycle.
  std::optional<std::vector<std::size_t>> topological_order() const {
    std::vector<std::size_t> indeg(size());
    for (std::size_t i = 0; i < size(); ++i) indeg[i] = pred_[i].size();
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < size(); ++i)
      if (indeg[i] == 0) ready.push(i);
    std::vector<std::size_t> order;
    order.reserve(size());
    while (!ready.empty()) {
      auto v = ready.top();
      ready.pop();
      order.push_back(v);
      for (auto w : succ_[v])
        if (--indeg[w] == 0) ready.push(w);
    }
    if (order.size() != size()) return std::nullopt;
    return order;
  }

  friend bool operator==(const Network& a, const Network& b) {
    return a.name_ == b.name_ && a.layers_ == b.layers_ && a.edges_ == b.edges_ && a.inputs_ == b.inputs_ &&
           a.outputs_ == b.outputs_;
  }

 private:
  std::string name_;
  std::vector<Layer> layers_;
  std::set<Edge> edges_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<std::vector<std::size_t>> pred_;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string rule;     // e.g. "cycle", "merge channel mismatch"
  std::string subject;  // layer id or "src->dst"
  std::string message;
};

inline std::vector<Violation> validate_network(const Network& net) {
  std::vector<Violation> out;
  auto report = [&](std::string rule, std::string subject, std::string message) {
    out.push_back({std::move(rule), std::move(subject), std::move(message)});
  };

  for (const auto& l : net.layers()) {
    if (l.id.empty()) report("empty id", l.id, "layer id must be non-empty");
    if (l.in_channels < 1 || l.out_channels < 1)
      report("nonpositive channels", l.id, "in/out channels must be >= 1");
    if (l.spatial_change.sign() <= 0)
      report("invalid spatial change", l.id, "spatial change must be a positive rational");
    if (l.cost.flops < 0 || l.cost.params < 0) report("negative cost", l.id, "flops/params must be >= 0");
    for (const auto& [dev, v] : l.cost.latency_us) {
      if (dev.empty()) report("empty device name", l.id, "latency device names must be non-empty");
      if (v.sign() < 0) report("negative cost", l.id, "latency on '" + dev + "' is negative");
    }
  }

  for (const auto& [src, dst] : net.edges()) {
    bool ok = true;
    if (!net.has_layer(src)) {
      report("unknown endpoint", src + "->" + dst, "edge source '" + src + "' does not exist");
      ok = false;
    }
    if (!net.has_layer(dst)) {
      report("unknown endpoint", src + "->" + dst, "edge target '" + dst + "' does not exist");
      ok = false;
    }
    if (ok && src == dst) report("cycle", src + "->" + dst, "self loop");
  }
  for (const auto& id : net.inputs())
    if (!net.has_layer(id)) report("unknown graph input", id, "graph input does not exist");
  for (const auto& id : net.outputs())
    if (!net.has_layer(id)) report("unknown graph output", id, "graph output does not exist");

  if (!net.topological_order()) report("cycle", net.name(), "graph contains a directed cycle");

  // Reachability: forward from inputs, backward from outputs.
  const auto n = net.size();
  auto sweep = [&](const std::vector<std::string>& seeds, bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack;
    for (const auto& id : seeds) {
      auto i = net.index_of(id);
      if (i != kNoLayer && !seen[i]) {
        seen[i] = 1;
        stack.push_back(i);
      }
    }
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      for (auto w : forward ? net.successors(v) : net.predecessors(v))
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    return seen;
  };
  auto from_inputs = sweep(net.inputs(), true);
  auto to_outputs = sweep(net.outputs(), false);
  for (std::size_t i = 0; i < n; ++i) {
    if (!from_inputs[i]) report("unreachable from input", net.layer(i).id, "not reachable from any graph input");
    if (!to_outputs[i]) report("cannot reach output", net.layer(i).id, "does not reach any graph output");
  }

  // Channel consistency on inbound edges.
  for (std::size_t i = 0; i < n; ++i) {
    const auto& l = net.layer(i);
    const auto& preds = net.predecessors(i);
    if (preds.empty()) continue;
    if (l.kind == LayerKind::concat) {
      std::int64_t sum = 0;
      for (auto p : preds) sum += net.layer(p).out_channels;
      if (sum != l.in_channels)
        report("concat channel mismatch", l.id,
               "in_channels " + std::to_string(l.in_channels) + " != inbound sum " + std::to_string(sum));
      continue;
    }
    const bool merge = l.kind == LayerKind::add || l.kind == LayerKind::mul;
    for (auto p : preds) {
      const auto& src = net.layer(p);
      if (src.out_channels != l.in_channels)
        report(merge ? "merge channel mismatch" : "edge channel mismatch", src.id + "->" + l.id,
               "inbound carries " + std::to_string(src.out_channels) + " channels, layer expects " +
                   std::to_string(l.in_channels));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sub-networks

struct SubNetwork {
  std::string source;                  // owning network name
  std::vector<std::string> layer_ids;  // sorted
  std::string input_layer;
  std::string output_layer;
  std::int64_t in_channels = 1;
  std::int64_t out_channels = 1;
  Rational spatial_change{1};
  CostVector cost;
  std::vector<Layer> layers;         // member layer copies, sorted by id
  std::vector<Edge> internal_edges;  // sorted

  friend bool operator==(const SubNetwork&, const SubNetwork&) = default;
};

enum class SisoStatus { ok, empty, not_siso, inconsistent_spatial };

struct SisoCheck {
  SisoStatus status = SisoStatus::empty;
  std::string reason;
  std::size_t input = kNoLayer;
  std::size_t output = kNoLayer;
  Rational spatial_change{1};
};

/// Connection-level single-input/single-output test for a set of layer indices.
///   - exactly one member without member predecessors (the input layer), and every
///     edge entering the set from outside targets it; it has at most one inbound
///     connection in the whole network (graph inputs count as one external connection);
///   - exactly one member without member successors (the output layer), and every edge
///     leaving the set originates at it;
///   - every input-to-output path inside the set has the same spatial-change product.
inline SisoCheck check_siso(const Network& net, const std::vector<std::size_t>& members) {
  SisoCheck res;
  if (members.empty()) {
    res.reason = "empty layer set";
    return res;
  }
  std::vector<char> in_set(net.size(), 0);
  for (auto m : members) in_set[m] = 1;

  auto fail = [&](SisoStatus s, std::string why) {
    res.status = s;
    res.reason = std::move(why);
    return res;
  };

  std::vector<std::size_t> local_indeg(net.size(), 0);
  for (auto m : members) {
    std::size_t inner = 0;
    for (auto p : net.predecessors(m)) inner += in_set[p] ? 1 : 0;
    local_indeg[m] = inner;
    if (inner == 0) {
      if (res.input != kNoLayer)
        return fail(SisoStatus::not_siso, "multiple entry layers '" + net.layer(res.input).id + "' and '" +
                                              net.layer(m).id + "'");
      res.input = m;
    } else if (inner != net.predecessors(m).size()) {
      return fail(SisoStatus::not_siso, "boundary input enters non-entry layer '" + net.layer(m).id + "'");
    }
    bool has_inner_succ = false;
    bool has_outer_succ = false;
    for (auto s : net.successors(m)) (in_set[s] ? has_inner_succ : has_outer_succ) = true;
    if (!has_inner_succ) {
      if (res.output != kNoLayer)
        return fail(SisoStatus::not_siso, "multiple exit layers '" + net.layer(res.output).id + "' and '" +
                                              net.layer(m).id + "'");
      res.output = m;
    }
    if (has_inner_succ && has_outer_succ)
      return fail(SisoStatus::not_siso, "boundary output leaves from non-exit layer '" + net.layer(m).id + "'");
  }
  if (res.input == kNoLayer) return fail(SisoStatus::not_siso, "no entry layer (cycle)");
  if (res.output == kNoLayer) return fail(SisoStatus::not_siso, "no exit layer (cycle)");
  if (net.predecessors(res.input).size() > 1)
    return fail(SisoStatus::not_siso, "entry layer '" + net.layer(res.input).id + "' has " +
                                          std::to_string(net.predecessors(res.input).size()) +
                                          " inbound connections");

  // Spatial products in member-local topological order.
  std::vector<std::optional<Rational>> product(net.size());
  std::vector<std::size_t> ready{res.input};
  product[res.input] = net.layer(res.input).spatial_change;
  std::size_t visited = 0;
  while (!ready.empty()) {
    auto v = ready.back();
    ready.pop_back();
    ++visited;
    for (auto w : net.successors(v)) {
      if (!in_set[w]) continue;
      Rational here = *product[v] * net.layer(w).spatial_change;
      if (product[w] && *product[w] != here)
        return fail(SisoStatus::inconsistent_spatial,
                    "paths into '" + net.layer(w).id + "' disagree on spatial change (" + product[w]->str() +
                        " vs " + here.str() + ")");
      product[w] = here;
      if (--local_indeg[w] == 0) ready.push_back(w);
    }
  }
  if (visited != members.size()) return fail(SisoStatus::not_siso, "member set contains a cycle");
  res.spatial_change = *product[res.output];
  res.status = SisoStatus::ok;
  return res;
}

/// Builds the SubNetwork for a verified member set. Precondition: check.status == ok.
inline SubNetwork make_subnetwork(const Network& net, std::vector<std::size_t> members, const SisoCheck& check) {
  std::sort(members.begin(), members.end());
  SubNetwork sub;
  sub.source = net.name();
  sub.input_layer = net.layer(check.input).id;
  sub.output_layer = net.layer(check.output).id;
  sub.in_channels = net.layer(check.input).in_channels;
  sub.out_channels = net.layer(check.output).out_channels;
  sub.spatial_change = check.spatial_change;
  std::vector<char> in_set(net.size(), 0);
  for (auto m : members) in_set[m] = 1;
  for (auto m : members) {
    const auto& l = net.layer(m);
    sub.layer_ids.push_back(l.id);
    sub.layers.push_back(l);
    sub.cost += l.cost;
    for (auto s : net.successors(m))
      if (in_set[s]) sub.internal_edges.emplace_back(l.id, net.layer(s).id);
  }
  std::sort(sub.internal_edges.begin(), sub.internal_edges.end());
  return sub;
}

inline SubNetwork subnetwork_from_layers(const Network& net, const std::vector<std::string>& layer_ids) {
  if (layer_ids.empty()) throw NotSISO("empty layer set");
  std::vector<std::size_t> members;
  for (const auto& id : layer_ids) {
    auto i = net.index_of(id);
    if (i == kNoLayer) throw NotSISO("layer '" + id + "' is not in network '" + net.name() + "'");
    members.push_back(i);
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  auto check = check_siso(net, members);
  switch (check.status) {
    case SisoStatus::ok:
      break;
    case SisoStatus::inconsistent_spatial:
      throw InconsistentSpatial(check.reason);
    default:
      throw NotSISO(check.reason);
  }
  return make_subnetwork(net, std::move(members), check);
}

}  // namespace blockswap
