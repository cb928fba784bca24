#pragma once

// Seeded generators for random layer DAGs and width-scaled "pretrained" variants.

#include <blockswap/graph.hpp>
#include <blockswap/json_io.hpp>
#include <blockswap/random.hpp>
#include <blockswap/rational.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace blockswap {

struct GenSpec {
  std::string name = "synth";
  std::int64_t layers = 8;
  double edge_prob = 0.3;
  std::vector<std::int64_t> channel_palette{8, 16, 32};
  std::vector<std::int64_t> stride_positions;  // topological positions with stride 2
  std::uint64_t seed = 0;
};

namespace synth_detail {

inline constexpr std::int64_t kBaseResolution = 32 * 32;

inline std::string node_id(std::int64_t i, std::int64_t n) {
  std::size_t width = 1;
  for (std::int64_t m = n - 1; m >= 10; m /= 10) ++width;
  auto digits = std::to_string(i);
  return "n" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

/// Toy cost model; `resolution` is the output side length relative to a 32x32 input.
inline CostVector layer_cost(const Layer& l, const Rational& resolution) {
  const std::int64_t hw = std::max<std::int64_t>(1, (Rational(kBaseResolution) * resolution * resolution).floor_int());
  CostVector c;
  switch (l.kind) {
    case LayerKind::conv: c.params = 9 * l.in_channels * l.out_channels; c.flops = 2 * c.params * hw; break;
    case LayerKind::dwconv: c.params = 9 * l.in_channels; c.flops = 2 * c.params * hw; break;
    case LayerKind::dense: c.params = l.in_channels * l.out_channels; c.flops = 2 * c.params; break;
    case LayerKind::other: c.params = l.in_channels * l.out_channels; c.flops = 2 * c.params * hw; break;
    case LayerKind::bn: c.params = 2 * l.out_channels; c.flops = 2 * l.out_channels * hw; break;
    case LayerKind::act:
    case LayerKind::pool:
    case LayerKind::add:
    case LayerKind::mul: c.flops = l.out_channels * hw; break;
    default: break;
  }
  if (c.flops > 0) c.latency_us["cpu0"] = Rational(c.flops + 500, 1000);
  return c;
}

inline bool channel_preserving(LayerKind k) {
  return k == LayerKind::act || k == LayerKind::bn || k == LayerKind::pool || k == LayerKind::dwconv ||
         k == LayerKind::add || k == LayerKind::mul || k == LayerKind::concat || k == LayerKind::input ||
         k == LayerKind::output;
}

}  // namespace synth_detail

/// Random DAG over a random topological order. Multi-input layers become add or concat
/// merges; branches whose width or resolution disagrees with the earliest inbound branch
/// get a width-adapting "other" layer spliced in, so the result always validates.
inline Network gen_network(const GenSpec& spec) {
  using namespace synth_detail;
  if (spec.layers < 1) throw std::invalid_argument("gen_network needs at least one layer");
  if (spec.channel_palette.empty()) throw std::invalid_argument("empty channel palette");
  Rng rng(spec.seed);
  const auto n = spec.layers;

  std::vector<std::string> ids;
  for (std::int64_t i = 0; i < n; ++i) ids.push_back(node_id(i, n));
  std::vector<std::int64_t> order(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

  // preds[j] in topological-position space
  std::vector<std::vector<std::int64_t>> preds(static_cast<std::size_t>(n));
  for (std::int64_t j = 1; j < n; ++j)
    for (std::int64_t i = 0; i < j; ++i)
      if (rng.bernoulli(spec.edge_prob)) preds[static_cast<std::size_t>(j)].push_back(i);
  std::vector<bool> has_succ(static_cast<std::size_t>(n), false);
  for (const auto& ps : preds)
    for (auto p : ps) has_succ[static_cast<std::size_t>(p)] = true;

  const std::set<std::int64_t> strides(spec.stride_positions.begin(), spec.stride_positions.end());
  static constexpr LayerKind kSingle[] = {LayerKind::conv, LayerKind::dwconv, LayerKind::act,
                                          LayerKind::bn,   LayerKind::pool,   LayerKind::dense};

  std::vector<Layer> layers;
  std::set<Edge> edges;
  std::vector<Layer> placed(static_cast<std::size_t>(n));
  std::vector<Rational> resolution(static_cast<std::size_t>(n), Rational(1));
  std::vector<std::string> inputs, outputs;

  for (std::int64_t j = 0; j < n; ++j) {
    const auto& ps = preds[static_cast<std::size_t>(j)];
    Layer l;
    l.id = ids[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])];
    auto palette_pick = [&] { return spec.channel_palette[rng.index(spec.channel_palette.size())]; };
    Rational in_res(1);
    if (ps.empty()) {
      l.kind = LayerKind::input;
      l.in_channels = l.out_channels = palette_pick();
      inputs.push_back(l.id);
    } else if (ps.size() == 1) {
      l.kind = kSingle[rng.index(std::size(kSingle))];
      const auto& src = placed[static_cast<std::size_t>(ps[0])];
      l.in_channels = src.out_channels;
      l.out_channels = channel_preserving(l.kind) ? l.in_channels : palette_pick();
      in_res = resolution[static_cast<std::size_t>(ps[0])];
      edges.emplace(src.id, l.id);
    } else {
      l.kind = rng.bernoulli(0.5) ? LayerKind::add : LayerKind::concat;
      const auto& first = placed[static_cast<std::size_t>(ps[0])];
      in_res = resolution[static_cast<std::size_t>(ps[0])];
      std::int64_t concat_width = 0;
      for (auto p : ps) {
        const auto& src = placed[static_cast<std::size_t>(p)];
        const auto& src_res = resolution[static_cast<std::size_t>(p)];
        const std::int64_t want = l.kind == LayerKind::add ? first.out_channels : src.out_channels;
        if (src.out_channels == want && src_res == in_res) {
          edges.emplace(src.id, l.id);
        } else {
          Layer adapt;
          adapt.id = l.id + ".from." + src.id;
          adapt.kind = LayerKind::other;
          adapt.in_channels = src.out_channels;
          adapt.out_channels = want;
          adapt.spatial_change = in_res / src_res;
          adapt.cost = layer_cost(adapt, in_res);
          edges.emplace(src.id, adapt.id);
          edges.emplace(adapt.id, l.id);
          layers.push_back(adapt);
        }
        concat_width += want;
      }
      l.in_channels = l.kind == LayerKind::add ? first.out_channels : concat_width;
      l.out_channels = l.in_channels;
    }
    if (strides.count(j) && l.kind != LayerKind::concat && l.kind != LayerKind::add) l.spatial_change = Rational(1, 2);
    resolution[static_cast<std::size_t>(j)] = in_res * l.spatial_change;
    l.cost = layer_cost(l, resolution[static_cast<std::size_t>(j)]);
    if (!has_succ[static_cast<std::size_t>(j)]) outputs.push_back(l.id);
    placed[static_cast<std::size_t>(j)] = l;
    layers.push_back(l);
  }
  return Network(spec.name, std::move(layers), std::move(edges), std::move(inputs), std::move(outputs));
}

struct PoolSpec {
  std::int64_t variants = 3;
  std::vector<std::int64_t> scale_factors{2, 3, 1};  // channel multipliers, cycled
  double depth_prob = 0.5;                           // chance of inserting one extra layer
  std::uint64_t seed = 0;
};

/// Width-scaled copies of `base` (integer factors keep merge widths consistent),
/// optionally deepened by one channel-preserving layer.
inline std::vector<Network> gen_pool(const Network& base, const PoolSpec& spec) {
  if (spec.variants < 0) throw std::invalid_argument("variants must be >= 0");
  if (spec.scale_factors.empty()) throw std::invalid_argument("empty scale factor list");
  for (auto f : spec.scale_factors)
    if (f < 1) throw std::invalid_argument("scale factors must be positive integers");
  Rng rng(spec.seed);
  std::vector<Network> pool;
  for (std::int64_t v = 0; v < spec.variants; ++v) {
    const auto factor = spec.scale_factors[static_cast<std::size_t>(v) % spec.scale_factors.size()];
    const Rational f2(factor * factor);
    std::vector<Layer> layers = base.layers();
    for (auto& l : layers) {
      l.in_channels *= factor;
      l.out_channels *= factor;
      l.cost.flops *= factor * factor;
      l.cost.params *= factor * factor;
      for (auto& [dev, lat] : l.cost.latency_us) lat *= f2;
    }
    std::set<Edge> edges = base.edges();
    auto outputs = base.outputs();
    if (!layers.empty() && rng.bernoulli(spec.depth_prob)) {
      const auto& host = layers[rng.index(layers.size())];
      Layer extra;
      extra.id = host.id + ".extra";
      extra.kind = LayerKind::act;
      extra.in_channels = extra.out_channels = host.out_channels;
      extra.cost.flops = host.out_channels * synth_detail::kBaseResolution;
      extra.cost.latency_us["cpu0"] = Rational(extra.cost.flops + 500, 1000);
      std::set<Edge> rewired;
      for (const auto& [s, d] : edges) rewired.emplace(s == host.id ? extra.id : s, d);
      rewired.emplace(host.id, extra.id);
      edges = std::move(rewired);
      for (auto& o : outputs)
        if (o == host.id) o = extra.id;
      layers.push_back(std::move(extra));
    }
    pool.emplace_back(base.name() + "_v" + std::to_string(v), std::move(layers), std::move(edges), base.inputs(),
                      std::move(outputs));
  }
  return pool;
}

inline GenSpec gen_spec_from_json(const Json& j) {
  using namespace json_detail;
  GenSpec s;
  if (j.contains("name")) s.name = as_string(j["name"], "$.name");
  s.layers = as_int(field(j, "layers", "$"), "$.layers");
  if (j.contains("edge_prob")) {
    if (!j["edge_prob"].is_number()) throw SchemaViolation("$.edge_prob", "expected number");
    s.edge_prob = j["edge_prob"].get<double>();
  }
  if (j.contains("channel_palette")) {
    s.channel_palette.clear();
    for (std::size_t i = 0; i < j["channel_palette"].size(); ++i)
      s.channel_palette.push_back(as_int(j["channel_palette"][i], "$.channel_palette[" + std::to_string(i) + "]"));
  }
  if (j.contains("stride_positions"))
    for (std::size_t i = 0; i < j["stride_positions"].size(); ++i)
      s.stride_positions.push_back(as_int(j["stride_positions"][i], "$.stride_positions[" + std::to_string(i) + "]"));
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  return s;
}

}  // namespace blockswap
