#pragma once

// Model house: sampled teacher sub-networks, compatible replacement blocks harvested
// from other networks, the target map, and channel masks reconciling widths.

#include <blockswap/enumeration.hpp>
#include <blockswap/errors.hpp>
#include <blockswap/graph.hpp>
#include <blockswap/json_io.hpp>
#include <blockswap/random.hpp>
#include <blockswap/rational.hpp>

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace blockswap {

struct ChannelMask {
  std::vector<bool> keep_in;
  std::vector<bool> keep_out;

  friend bool operator==(const ChannelMask&, const ChannelMask&) = default;
};

inline std::int64_t popcount(const std::vector<bool>& bits) {
  return static_cast<std::int64_t>(std::count(bits.begin(), bits.end(), true));
}

enum class Origin { teacher, pretrained, expanded };

inline std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::teacher: return "teacher";
    case Origin::pretrained: return "pretrained";
    case Origin::expanded: return "expanded";
  }
  return "teacher";
}

inline std::optional<Origin> parse_origin(std::string_view s) {
  if (s == "teacher") return Origin::teacher;
  if (s == "pretrained") return Origin::pretrained;
  if (s == "expanded") return Origin::expanded;
  return std::nullopt;
}

struct Alternative {
  std::string id;
  SubNetwork subnet;
  Origin origin = Origin::teacher;
  std::optional<ChannelMask> mask;
  std::string target_id;

  friend bool operator==(const Alternative&, const Alternative&) = default;
};

struct HouseParams {
  std::int64_t n_t = 100;
  std::int64_t n_p = 200;
  std::int64_t n_expand = 200;
  Rational r{3, 10};
  std::int64_t min_size = 1;
  std::uint64_t seed = 0;

  friend bool operator==(const HouseParams&, const HouseParams&) = default;
};

struct ModelHouse {
  Network teacher;
  std::map<std::string, SubNetwork> teacher_subnets;
  std::vector<Alternative> alternatives;  // sorted by id
  HouseParams params;
  std::vector<std::string> warnings;  // not serialized

  const Alternative* find(std::string_view id) const {
    auto it = std::lower_bound(alternatives.begin(), alternatives.end(), id,
                               [](const Alternative& a, std::string_view key) { return a.id < key; });
    return it != alternatives.end() && it->id == id ? &*it : nullptr;
  }
  const SubNetwork& target_of(const Alternative& alt) const { return teacher_subnets.at(alt.target_id); }
};

inline std::string make_id(char prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%05zu", prefix, n);
  return buf;
}

// ---------------------------------------------------------------------------

inline bool is_compatible(const SubNetwork& alt, const SubNetwork& target) {
  return alt.spatial_change == target.spatial_change && alt.in_channels >= target.in_channels &&
         alt.out_channels >= target.out_channels;
}

inline constexpr int kSamplingAttempts = 32;

/// Draws one sub-network near a random start: the traversal's closure pairs are cut
/// to the first ceil(r * m) in pop order, filtered by size, and one is picked uniformly.
inline SubNetwork subnet_sampling(const Network& net, const Rational& r, std::int64_t min_size, Rng& rng,
                                  std::optional<std::size_t> forced_start = std::nullopt) {
  if (r.sign() <= 0 || r > Rational(1)) throw std::invalid_argument("sampling ratio r must lie in (0, 1]");
  std::vector<std::size_t> starts;
  if (forced_start) {
    starts.push_back(*forced_start);
  } else {
    for (std::size_t i = 0; i < net.size(); ++i)
      if (is_eligible_start(net, i)) starts.push_back(i);
  }
  if (starts.empty() || (forced_start && !is_eligible_start(net, *forced_start)))
    throw NoSubnetFound("network '" + net.name() + "' has no layer with a single input");

  const int attempts = forced_start ? 1 : kSamplingAttempts;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    auto start = starts[rng.index(starts.size())];
    auto pairs = modified_dfs(net, start);
    auto keep = static_cast<std::size_t>((r * Rational(static_cast<std::int64_t>(pairs.size()))).ceil_int());
    std::vector<const ClosurePair*> candidates;
    for (std::size_t i = 0; i < std::min(keep, pairs.size()); ++i)
      if (static_cast<std::int64_t>(pairs[i].member_ids.size()) >= min_size) candidates.push_back(&pairs[i]);
    if (candidates.empty()) continue;
    return subnetwork_from_layers(net, candidates[rng.index(candidates.size())]->member_ids);
  }
  throw NoSubnetFound("no sub-network of size >= " + std::to_string(min_size) + " in '" + net.name() + "' after " +
                      std::to_string(attempts) + " attempts");
}

/// Keep the first `keep` of `width` channels.
inline std::vector<bool> keep_first(std::int64_t width, std::int64_t keep) {
  std::vector<bool> bits(static_cast<std::size_t>(width), false);
  for (std::int64_t i = 0; i < std::min(width, keep); ++i) bits[static_cast<std::size_t>(i)] = true;
  return bits;
}

/// Keep the `keep` highest-scoring channels; ties go to the lower index.
inline std::vector<bool> keep_top(const std::vector<double>& scores, std::int64_t keep) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });
  std::vector<bool> bits(scores.size(), false);
  for (std::int64_t i = 0; i < keep && i < static_cast<std::int64_t>(order.size()); ++i) bits[order[i]] = true;
  return bits;
}

inline std::optional<ChannelMask> default_mask(const SubNetwork& alt, const SubNetwork& target) {
  if (alt.in_channels == target.in_channels && alt.out_channels == target.out_channels) return std::nullopt;
  return ChannelMask{keep_first(alt.in_channels, target.in_channels), keep_first(alt.out_channels, target.out_channels)};
}

/// Boundary widths of `sub` become `new_in`/`new_out`; member flops and params are
/// scaled by (new_in/in)*(new_out/out) and rounded down per layer.
inline SubNetwork narrow_boundary(const SubNetwork& sub, std::int64_t new_in, std::int64_t new_out) {
  SubNetwork out = sub;
  const Rational factor = Rational(new_in, sub.in_channels) * Rational(new_out, sub.out_channels);
  out.cost = CostVector{};
  for (auto& l : out.layers) {
    l.cost.flops = (Rational(l.cost.flops) * factor).floor_int();
    l.cost.params = (Rational(l.cost.params) * factor).floor_int();
    if (l.id == out.input_layer) l.in_channels = new_in;
    if (l.id == out.output_layer) l.out_channels = new_out;
    out.cost += l.cost;
  }
  out.in_channels = new_in;
  out.out_channels = new_out;
  return out;
}

/// The alternative's block with its masks applied. Unmasked alternatives come back unchanged.
inline SubNetwork apply_mask(const Alternative& alt) {
  if (!alt.mask) return alt.subnet;
  const auto& m = *alt.mask;
  if (static_cast<std::int64_t>(m.keep_in.size()) != alt.subnet.in_channels ||
      static_cast<std::int64_t>(m.keep_out.size()) != alt.subnet.out_channels)
    throw MaskLengthMismatch("alternative '" + alt.id + "': mask lengths " + std::to_string(m.keep_in.size()) + "/" +
                             std::to_string(m.keep_out.size()) + " vs channels " +
                             std::to_string(alt.subnet.in_channels) + "/" + std::to_string(alt.subnet.out_channels));
  auto pin = popcount(m.keep_in);
  auto pout = popcount(m.keep_out);
  if (pin < 1 || pout < 1) throw MaskLengthMismatch("alternative '" + alt.id + "': mask keeps no channels");
  return narrow_boundary(alt.subnet, pin, pout);
}

// ---------------------------------------------------------------------------

/// Fills the teacher side of the house with up to n_t distinct sub-networks
/// (50 * n_t sampling attempts at most) and registers each as its own alternative.
inline void sample_teacher_side(ModelHouse& house, Rng& rng) {
  const auto& p = house.params;
  std::set<std::vector<std::string>> seen;
  std::vector<SubNetwork> picked;
  const std::int64_t cap = 50 * p.n_t;
  for (std::int64_t attempt = 0; attempt < cap && static_cast<std::int64_t>(picked.size()) < p.n_t; ++attempt) {
    SubNetwork s;
    try {
      s = subnet_sampling(house.teacher, p.r, p.min_size, rng);
    } catch (const NoSubnetFound& e) {
      house.warnings.push_back(e.what());
      break;
    }
    if (seen.insert(s.layer_ids).second) picked.push_back(std::move(s));
  }
  if (static_cast<std::int64_t>(picked.size()) < p.n_t)
    house.warnings.push_back("teacher side stopped at " + std::to_string(picked.size()) + " of " +
                             std::to_string(p.n_t) + " sub-networks");
  for (std::size_t i = 0; i < picked.size(); ++i) house.teacher_subnets.emplace(make_id('T', i), std::move(picked[i]));
}

inline ModelHouse construct(const Network& teacher, const std::vector<Network>& pretrained, const HouseParams& params) {
  if (params.n_p > 0 && pretrained.empty()) throw EmptyPretrainedSet("n_p > 0 but no pretrained networks were given");
  ModelHouse house;
  house.teacher = teacher;
  house.params = params;
  Rng rng(params.seed);

  sample_teacher_side(house, rng);

  std::vector<Alternative> alts;
  std::vector<std::string> target_ids;
  for (const auto& [id, sub] : house.teacher_subnets) {
    target_ids.push_back(id);
    Alternative a;
    a.subnet = sub;
    a.origin = Origin::teacher;
    a.target_id = id;
    alts.push_back(std::move(a));
  }

  if (params.n_p > 0 && !target_ids.empty()) {
    std::set<std::tuple<std::string, std::vector<std::string>, std::string>> seen;
    std::int64_t added = 0;
    const std::int64_t cap = 50 * params.n_p;
    for (std::int64_t attempt = 0; attempt < cap && added < params.n_p; ++attempt) {
      const auto& target_id = target_ids[rng.index(target_ids.size())];
      const auto& net = pretrained[rng.index(pretrained.size())];
      SubNetwork cand;
      try {
        cand = subnet_sampling(net, params.r, params.min_size, rng);
      } catch (const NoSubnetFound&) {
        continue;
      }
      const auto& target = house.teacher_subnets.at(target_id);
      if (!is_compatible(cand, target)) continue;
      // The teacher may be listed as its own donor; its blocks keep the teacher origin.
      const bool from_teacher = net == teacher;
      if (from_teacher && cand.layer_ids == target.layer_ids) continue;  // already the identity
      if (!seen.emplace(cand.source, cand.layer_ids, target_id).second) continue;
      Alternative a;
      a.mask = default_mask(cand, target);
      a.subnet = std::move(cand);
      a.origin = from_teacher ? Origin::teacher : Origin::pretrained;
      a.target_id = target_id;
      alts.push_back(std::move(a));
      ++added;
    }
    if (added < params.n_p)
      house.warnings.push_back("pretrained side stopped at " + std::to_string(added) + " of " +
                               std::to_string(params.n_p) + " alternatives");
  }

  for (std::size_t i = 0; i < alts.size(); ++i) alts[i].id = make_id('A', i);
  house.alternatives = std::move(alts);
  return house;
}

/// Per-channel importance for an alternative's boundaries (higher is kept first).
struct ChannelScores {
  std::vector<double> in;
  std::vector<double> out;
};

/// Adds up to n_expand narrowed clones of existing alternatives. Each boundary of width
/// c is cut to k ~ U[ceil(c/2), c] channels (raised to the target width when needed),
/// with costs rescaled; the clone is then masked down to its target's widths.
inline ModelHouse expand(const ModelHouse& house, std::int64_t n_expand,
                         const std::map<std::string, ChannelScores>& scores, std::uint64_t seed) {
  ModelHouse out = house;
  if (n_expand <= 0) return out;
  // Only blocks wider than their target at some boundary can be narrowed.
  std::vector<const Alternative*> bases;
  for (const auto& a : house.alternatives) {
    const auto& t = house.target_of(a);
    if (a.subnet.in_channels > t.in_channels || a.subnet.out_channels > t.out_channels) bases.push_back(&a);
  }
  if (bases.empty()) {
    out.warnings.push_back("expansion skipped: no alternative is wider than its target");
    return out;
  }
  Rng rng(seed);

  auto pick_keep = [&](const std::vector<double>* sc, std::int64_t width, std::int64_t keep) {
    if (sc && static_cast<std::int64_t>(sc->size()) == width) return keep_top(*sc, keep);
    return keep_first(width, keep);
  };

  std::set<std::tuple<std::string, std::vector<std::string>, std::string, std::int64_t, std::int64_t>> seen;
  for (const auto& a : house.alternatives)
    seen.emplace(a.subnet.source, a.subnet.layer_ids, a.target_id, a.subnet.in_channels, a.subnet.out_channels);

  std::size_t next_id = house.alternatives.size();
  std::int64_t added = 0;
  for (std::int64_t attempt = 0; attempt < 50 * n_expand && added < n_expand; ++attempt) {
    const auto& base = *bases[rng.index(bases.size())];
    const auto& target = house.target_of(base);
    const auto c_in = base.subnet.in_channels;
    const auto c_out = base.subnet.out_channels;
    auto k_in = std::max<std::int64_t>(rng.between(Rational(c_in, 2).ceil_int(), c_in), target.in_channels);
    auto k_out = std::max<std::int64_t>(rng.between(Rational(c_out, 2).ceil_int(), c_out), target.out_channels);
    if (!seen.emplace(base.subnet.source, base.subnet.layer_ids, base.target_id, k_in, k_out).second) continue;

    auto found = scores.find(base.id);
    const ChannelScores* sc = found == scores.end() ? nullptr : &found->second;
    auto kept_in = pick_keep(sc ? &sc->in : nullptr, c_in, k_in);
    auto kept_out = pick_keep(sc ? &sc->out : nullptr, c_out, k_out);

    Alternative clone;
    clone.subnet = narrow_boundary(base.subnet, k_in, k_out);
    clone.origin = Origin::expanded;
    clone.target_id = base.target_id;
    if (k_in != target.in_channels || k_out != target.out_channels) {
      // Scores of surviving channels, in their new positions.
      auto restrict = [](const std::vector<double>* s, const std::vector<bool>& kept) {
        std::vector<double> r;
        if (!s) return r;
        for (std::size_t i = 0; i < kept.size(); ++i)
          if (kept[i]) r.push_back((*s)[i]);
        return r;
      };
      auto s_in = restrict(sc && sc->in.size() == kept_in.size() ? &sc->in : nullptr, kept_in);
      auto s_out = restrict(sc && sc->out.size() == kept_out.size() ? &sc->out : nullptr, kept_out);
      clone.mask = ChannelMask{pick_keep(s_in.empty() ? nullptr : &s_in, k_in, target.in_channels),
                               pick_keep(s_out.empty() ? nullptr : &s_out, k_out, target.out_channels)};
    }
    clone.id = make_id('A', next_id++);
    out.alternatives.push_back(std::move(clone));
    ++added;
  }
  if (added < n_expand)
    out.warnings.push_back("expansion stopped at " + std::to_string(added) + " of " + std::to_string(n_expand) +
                           " alternatives");
  return out;
}

/// Structural invariants of a house; empty when it is consistent.
inline std::vector<std::string> check_house(const ModelHouse& house) {
  std::vector<std::string> problems;
  std::set<std::vector<std::string>> distinct;
  for (const auto& [id, sub] : house.teacher_subnets)
    if (!distinct.insert(sub.layer_ids).second) problems.push_back("teacher sub-network " + id + " is a duplicate");
  for (std::size_t i = 0; i < house.alternatives.size(); ++i) {
    const auto& a = house.alternatives[i];
    if (i > 0 && !(house.alternatives[i - 1].id < a.id)) problems.push_back("alternatives not sorted/unique at " + a.id);
    auto t = house.teacher_subnets.find(a.target_id);
    if (t == house.teacher_subnets.end()) {
      problems.push_back(a.id + ": unknown target " + a.target_id);
      continue;
    }
    if (!is_compatible(a.subnet, t->second)) problems.push_back(a.id + ": not compatible with " + a.target_id);
    if (a.mask) {
      if (popcount(a.mask->keep_in) != t->second.in_channels || popcount(a.mask->keep_out) != t->second.out_channels)
        problems.push_back(a.id + ": mask popcounts do not match target widths");
      if (static_cast<std::int64_t>(a.mask->keep_in.size()) != a.subnet.in_channels ||
          static_cast<std::int64_t>(a.mask->keep_out.size()) != a.subnet.out_channels)
        problems.push_back(a.id + ": mask lengths do not match alternative widths");
    } else if (a.subnet.in_channels != t->second.in_channels || a.subnet.out_channels != t->second.out_channels) {
      problems.push_back(a.id + ": wider than target but unmasked");
    }
  }
  return problems;
}

// ---------------------------------------------------------------------------
// JSON

inline Json bits_to_json(const std::vector<bool>& bits) {
  Json out = Json::array();
  for (bool b : bits) out.push_back(b ? 1 : 0);
  return out;
}

inline std::vector<bool> bits_from_json(const Json& j, const std::string& path) {
  json_detail::as_array(j, path);
  std::vector<bool> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(json_detail::as_bool(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline Json subnet_summary_to_json(const SubNetwork& s) {
  return Json{{"source_network", s.source},
              {"member_ids", s.layer_ids},
              {"input_layer", s.input_layer},
              {"output_layer", s.output_layer},
              {"in_channels", s.in_channels},
              {"out_channels", s.out_channels},
              {"spatial_change", Json{{"num", s.spatial_change.numerator()}, {"den", s.spatial_change.denominator()}}},
              {"cost", cost_to_json(s.cost)}};
}

inline Json alternative_to_json(const Alternative& a) {
  Json j = subnet_summary_to_json(a.subnet);
  j["id"] = a.id;
  j["origin"] = std::string(to_string(a.origin));
  j["target_id"] = a.target_id;
  Json layers = Json::array();
  for (const auto& l : a.subnet.layers) layers.push_back(layer_to_json(l));
  j["layers"] = layers;
  j["edges"] = edges_to_json(a.subnet.internal_edges);
  if (a.mask) j["mask"] = Json{{"keep_in", bits_to_json(a.mask->keep_in)}, {"keep_out", bits_to_json(a.mask->keep_out)}};
  return j;
}

/// Rebuilds the block from its stored layers and checks the stored summary against it.
inline SubNetwork subnet_from_json_block(const Json& j, const std::string& path) {
  using namespace json_detail;
  auto source = as_string(field(j, "source_network", path), path + ".source_network");
  const auto& jl = as_array(field(j, "layers", path), path + ".layers");
  std::vector<Layer> layers;
  for (std::size_t i = 0; i < jl.size(); ++i)
    layers.push_back(layer_from_json(jl[i], path + ".layers[" + std::to_string(i) + "]"));
  auto edges = edges_from_json(field(j, "edges", path), path + ".edges");
  std::vector<std::string> ids;
  for (const auto& l : layers) ids.push_back(l.id);
  Network frag(source, std::move(layers), {edges.begin(), edges.end()}, {}, {});
  // Inside the fragment the entry layer has no inbound edge, matching a graph input.
  SubNetwork sub;
  try {
    sub = subnetwork_from_layers(frag, ids);
  } catch (const Error& e) {
    throw SchemaViolation(path, e.what());
  }
  auto expect_ids = as_string_list(field(j, "member_ids", path), path + ".member_ids");
  std::sort(expect_ids.begin(), expect_ids.end());
  if (expect_ids != sub.layer_ids) throw SchemaViolation(path + ".member_ids", "does not match stored layers");
  if (as_string(field(j, "input_layer", path), path + ".input_layer") != sub.input_layer ||
      as_string(field(j, "output_layer", path), path + ".output_layer") != sub.output_layer)
    throw SchemaViolation(path, "boundary layers do not match stored layers");
  if (as_int(field(j, "in_channels", path), path + ".in_channels") != sub.in_channels ||
      as_int(field(j, "out_channels", path), path + ".out_channels") != sub.out_channels)
    throw SchemaViolation(path, "boundary channels do not match stored layers");
  if (cost_from_json(field(j, "cost", path), path + ".cost") != sub.cost)
    throw SchemaViolation(path + ".cost", "does not equal the sum of member costs");
  return sub;
}

inline Json house_to_json(const ModelHouse& house) {
  Json subs = Json::object();
  for (const auto& [id, s] : house.teacher_subnets) subs[id] = subnet_summary_to_json(s);
  Json alts = Json::array();
  for (const auto& a : house.alternatives) alts.push_back(alternative_to_json(a));
  const auto& p = house.params;
  return Json{{"teacher", network_to_json(house.teacher)},
              {"teacher_subnets", subs},
              {"alternatives", alts},
              {"params", Json{{"n_t", p.n_t},
                              {"n_p", p.n_p},
                              {"n_expand", p.n_expand},
                              {"r", p.r.str()},
                              {"min_size", p.min_size},
                              {"seed", p.seed}}}};
}

inline ModelHouse house_from_json(const Json& j) {
  using namespace json_detail;
  const std::string root = "$";
  ModelHouse house;
  house.teacher = network_from_json(field(j, "teacher", root), "$.teacher");

  const auto& subs = field(j, "teacher_subnets", root);
  if (!subs.is_object()) throw SchemaViolation("$.teacher_subnets", "expected object");
  for (auto it = subs.begin(); it != subs.end(); ++it) {
    auto path = "$.teacher_subnets." + it.key();
    auto ids = as_string_list(field(it.value(), "member_ids", path), path + ".member_ids");
    SubNetwork sub;
    try {
      sub = subnetwork_from_layers(house.teacher, ids);
    } catch (const Error& e) {
      throw SchemaViolation(path, e.what());
    }
    if (as_string(field(it.value(), "output_layer", path), path + ".output_layer") != sub.output_layer)
      throw SchemaViolation(path + ".output_layer", "does not match the teacher graph");
    house.teacher_subnets.emplace(it.key(), std::move(sub));
  }

  const auto& alts = as_array(field(j, "alternatives", root), "$.alternatives");
  for (std::size_t i = 0; i < alts.size(); ++i) {
    auto path = "$.alternatives[" + std::to_string(i) + "]";
    Alternative a;
    a.id = as_string(field(alts[i], "id", path), path + ".id");
    auto origin = as_string(field(alts[i], "origin", path), path + ".origin");
    auto o = parse_origin(origin);
    if (!o) throw SchemaViolation(path + ".origin", "unknown origin '" + origin + "'");
    a.origin = *o;
    a.target_id = as_string(field(alts[i], "target_id", path), path + ".target_id");
    if (!house.teacher_subnets.count(a.target_id)) throw SchemaViolation(path + ".target_id", "unknown target");
    a.subnet = subnet_from_json_block(alts[i], path);
    if (alts[i].contains("mask") && !alts[i]["mask"].is_null()) {
      const auto& m = alts[i]["mask"];
      a.mask = ChannelMask{bits_from_json(field(m, "keep_in", path + ".mask"), path + ".mask.keep_in"),
                           bits_from_json(field(m, "keep_out", path + ".mask"), path + ".mask.keep_out")};
    }
    house.alternatives.push_back(std::move(a));
  }
  std::sort(house.alternatives.begin(), house.alternatives.end(),
            [](const Alternative& x, const Alternative& y) { return x.id < y.id; });

  const auto& p = field(j, "params", root);
  house.params.n_t = as_int(field(p, "n_t", "$.params"), "$.params.n_t");
  house.params.n_p = as_int(field(p, "n_p", "$.params"), "$.params.n_p");
  house.params.n_expand = as_int(field(p, "n_expand", "$.params"), "$.params.n_expand");
  house.params.r = as_rational(field(p, "r", "$.params"), "$.params.r");
  house.params.min_size = as_int(field(p, "min_size", "$.params"), "$.params.min_size");
  const auto& seed = field(p, "seed", "$.params");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) throw SchemaViolation("$.params.seed", "expected integer");
  house.params.seed = seed.get<std::uint64_t>();

  auto problems = check_house(house);
  if (!problems.empty()) throw SchemaViolation("$.alternatives", problems.front());
  return house;
}

inline std::string serialize_house(const ModelHouse& house) { return dump_canonical(house_to_json(house)); }
inline ModelHouse parse_house(std::string_view text) { return house_from_json(parse_json_text(text)); }

}  // namespace blockswap
