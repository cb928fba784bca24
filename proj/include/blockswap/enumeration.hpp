#pragma once

// Single-input/single-output sub-network enumeration.
//
// The traversal only moves into a layer once every one of its inbound layers has
// been popped (a per-layer counter tracks how many inbound layers were visited).
// A pop closes a sub-network when the popped layer was alone on the stack and no
// popped layer has an edge into a layer that has not been pushed yet.

#include <blockswap/errors.hpp>
#include <blockswap/graph.hpp>
#include <blockswap/json_io.hpp>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace blockswap {

struct ClosurePair {
  std::string output_layer;
  std::vector<std::string> member_ids;  // sorted
  std::size_t pop_index = 0;

  friend bool operator==(const ClosurePair&, const ClosurePair&) = default;
};

struct DfsOptions {
  /// Also require that no visited layer feeds a layer that has not been pushed, and
  /// that no earlier pop was a layer without successors (a second exit).
  /// Turning this off reproduces the bare singleton-stack rule.
  bool require_no_pending = true;
  /// Re-check every candidate with check_siso and drop failures.
  bool verify_siso = true;
  /// Successor lists are rotated left by this amount before iteration.
  std::size_t neighbor_rotation = 0;
};

struct TraversalState {
  std::vector<std::size_t> stack;
  std::vector<std::size_t> delta;
  std::vector<std::size_t> popped;
  std::size_t pending_out = 0;
  std::size_t dead_ends = 0;  // popped layers with no successors at all
};

inline bool is_eligible_start(const Network& net, std::size_t i) { return net.predecessors(i).size() <= 1; }

inline std::vector<ClosurePair> modified_dfs(const Network& net, std::size_t start, const DfsOptions& opts = {}) {
  if (start >= net.size()) throw StartNotSingleInput("start index out of range");
  if (!is_eligible_start(net, start))
    throw StartNotSingleInput("layer '" + net.layer(start).id + "' has " +
                              std::to_string(net.predecessors(start).size()) + " inbound connections");

  TraversalState st;
  st.delta.assign(net.size(), 0);
  std::vector<char> pushed(net.size(), 0);
  st.stack.push_back(start);
  pushed[start] = 1;

  std::vector<ClosurePair> pairs;
  while (!st.stack.empty()) {
    const auto v = st.stack.back();
    st.stack.pop_back();
    const std::size_t pop_index = st.popped.size();

    if (st.stack.empty() && (!opts.require_no_pending || (st.pending_out == 0 && st.dead_ends == 0))) {
      std::vector<std::size_t> members = st.popped;
      members.push_back(v);
      std::sort(members.begin(), members.end());
      bool keep = true;
      if (opts.verify_siso) keep = check_siso(net, members).status == SisoStatus::ok;
      if (keep) {
        ClosurePair pair;
        pair.output_layer = net.layer(v).id;
        pair.pop_index = pop_index;
        for (auto m : members) pair.member_ids.push_back(net.layer(m).id);
        pairs.push_back(std::move(pair));
      }
    }
    st.popped.push_back(v);

    std::vector<std::size_t> outs = net.successors(v);
    if (outs.empty()) ++st.dead_ends;
    if (!outs.empty() && opts.neighbor_rotation % outs.size() != 0)
      std::rotate(outs.begin(), outs.begin() + static_cast<std::ptrdiff_t>(opts.neighbor_rotation % outs.size()),
                  outs.end());
    for (auto u : outs) {
      if (pushed[u]) continue;  // only reachable on malformed (cyclic) inputs
      ++st.delta[u];
      ++st.pending_out;
      if (st.delta[u] == net.predecessors(u).size()) {
        st.pending_out -= st.delta[u];
        pushed[u] = 1;
        st.stack.push_back(u);
      }
    }
  }
  return pairs;
}

inline std::vector<ClosurePair> modified_dfs(const Network& net, std::string_view start, const DfsOptions& opts = {}) {
  auto i = net.index_of(start);
  if (i == kNoLayer) throw StartNotSingleInput("unknown start layer '" + std::string(start) + "'");
  return modified_dfs(net, i, opts);
}

struct EnumerateOptions {
  /// Union over every rotation of the successor lists, not only the canonical order.
  bool union_rotations = false;
};

/// All SISO sub-networks, sorted by member-id list.
inline std::vector<SubNetwork> enumerate_all(const Network& net, const EnumerateOptions& opts = {}) {
  std::map<std::vector<std::string>, SubNetwork> found;
  std::size_t max_rotation = 1;
  if (opts.union_rotations)
    for (std::size_t i = 0; i < net.size(); ++i) max_rotation = std::max(max_rotation, net.successors(i).size());
  for (std::size_t start = 0; start < net.size(); ++start) {
    if (!is_eligible_start(net, start)) continue;
    for (std::size_t rot = 0; rot < max_rotation; ++rot) {
      DfsOptions dfs;
      dfs.neighbor_rotation = rot;
      for (auto& pair : modified_dfs(net, start, dfs)) {
        if (found.count(pair.member_ids)) continue;
        auto sub = subnetwork_from_layers(net, pair.member_ids);
        found.emplace(pair.member_ids, std::move(sub));
      }
    }
  }
  std::vector<SubNetwork> out;
  out.reserve(found.size());
  for (auto& [ids, sub] : found) out.push_back(std::move(sub));
  return out;
}

inline constexpr std::size_t kDefaultBruteForceCap = 14;

/// Exhaustive oracle: every nonempty weakly connected subset passing check_siso.
inline std::vector<SubNetwork> brute_force_enumerate(const Network& net, std::size_t cap = kDefaultBruteForceCap) {
  const std::size_t n = net.size();
  if (n > cap || n >= 63)
    throw TooLarge(std::to_string(n) + " layers exceeds brute-force cap " + std::to_string(cap));
  std::vector<SubNetwork> out;
  std::vector<std::size_t> members;
  std::vector<std::size_t> stack;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    members.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) members.push_back(i);

    std::uint64_t seen = std::uint64_t{1} << members.front();
    stack.assign(1, members.front());
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      auto visit = [&](std::size_t w) {
        if ((mask >> w & 1) && !(seen >> w & 1)) {
          seen |= std::uint64_t{1} << w;
          stack.push_back(w);
        }
      };
      for (auto w : net.successors(v)) visit(w);
      for (auto w : net.predecessors(v)) visit(w);
    }
    if (seen != mask) continue;

    auto check = check_siso(net, members);
    if (check.status == SisoStatus::ok) out.push_back(make_subnetwork(net, members, check));
  }
  std::sort(out.begin(), out.end(), [](const SubNetwork& a, const SubNetwork& b) { return a.layer_ids < b.layer_ids; });
  return out;
}

inline std::vector<std::vector<std::string>> member_sets(const std::vector<SubNetwork>& subs) {
  std::vector<std::vector<std::string>> out;
  out.reserve(subs.size());
  for (const auto& s : subs) out.push_back(s.layer_ids);
  std::sort(out.begin(), out.end());
  return out;
}

inline Json member_sets_to_json(const std::vector<std::vector<std::string>>& sets) {
  Json out = Json::array();
  for (const auto& s : sets) out.push_back(s);
  return out;
}

}  // namespace blockswap
