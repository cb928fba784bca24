#include "test_support.hpp"

#include <gtest/gtest.h>

namespace blockswap {
namespace {

using testing::chain4;
using testing::diamond;
using testing::IdSets;

IdSets pair_sets(const std::vector<ClosurePair>& pairs) {
  IdSets out;
  for (const auto& p : pairs) out.push_back(p.member_ids);
  return out;
}

TEST(ModifiedDfs, Chain4FromA) {
  auto pairs = modified_dfs(chain4(), "a");
  EXPECT_EQ(pair_sets(pairs), (IdSets{{"a"}, {"a", "b"}, {"a", "b", "c"}, {"a", "b", "c", "d"}}));
  for (std::size_t i = 0; i < pairs.size(); ++i) EXPECT_EQ(pairs[i].pop_index, i);
  EXPECT_EQ(pairs.back().output_layer, "d");
}

TEST(ModifiedDfs, Chain4FromB) {
  EXPECT_EQ(pair_sets(modified_dfs(chain4(), "b")), (IdSets{{"b"}, {"b", "c"}, {"b", "c", "d"}}));
}

TEST(ModifiedDfs, DiamondEmitsOnlyTrivialAndFull) {
  auto pairs = modified_dfs(diamond(), "l0");
  EXPECT_EQ(pair_sets(pairs), (IdSets{{"l0"}, {"l0", "l1", "l2", "l3"}}));
  EXPECT_EQ(pairs[0].pop_index, 0u);
  EXPECT_EQ(pairs[1].pop_index, 3u);
}

TEST(ModifiedDfs, SingletonStackRuleAloneAdmitsTheInvalidBranchSet) {
  // Pops: l0, l2 (stack {l1,l2}), l1 (alone, but l2 -> l3 still pending), l3.
  DfsOptions bare;
  bare.require_no_pending = false;
  bare.verify_siso = false;
  auto pairs = modified_dfs(diamond(), "l0", bare);
  IdSets expected{{"l0"}, {"l0", "l1", "l2"}, {"l0", "l1", "l2", "l3"}};
  EXPECT_EQ(pair_sets(pairs), expected);
  EXPECT_EQ(pairs[1].output_layer, "l1");
  EXPECT_EQ(pairs[1].pop_index, 2u);
  EXPECT_THROW(subnetwork_from_layers(diamond(), pairs[1].member_ids), NotSISO);
}

TEST(ModifiedDfs, StartWithTwoInputsRejected) {
  EXPECT_THROW(modified_dfs(diamond(), "l3"), StartNotSingleInput);
}

TEST(ModifiedDfs, DeterministicAndPopOrderSound) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    GenSpec spec;
    spec.layers = 9;
    spec.edge_prob = 0.35;
    spec.seed = seed;
    auto net = gen_network(spec);
    for (std::size_t s = 0; s < net.size(); ++s) {
      if (!is_eligible_start(net, s)) continue;
      EXPECT_EQ(modified_dfs(net, s), modified_dfs(net, s));
      // Every emitted set is closed under predecessors apart from the start layer.
      for (const auto& pair : modified_dfs(net, s)) {
        std::set<std::string> members(pair.member_ids.begin(), pair.member_ids.end());
        for (const auto& id : pair.member_ids) {
          if (id == net.layer(s).id) continue;
          for (auto p : net.predecessors(net.index_of(id))) EXPECT_TRUE(members.count(net.layer(p).id));
        }
      }
    }
  }
}

TEST(ModifiedDfs, StrengthenedRuleAloneYieldsSisoSets) {
  // Without the re-check, every closure event must already be a valid sub-network.
  DfsOptions raw;
  raw.verify_siso = false;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenSpec spec;
    spec.layers = 3 + static_cast<std::int64_t>(seed % 8);
    spec.edge_prob = 0.3;
    spec.stride_positions = {1, 4};
    spec.seed = seed;
    auto net = gen_network(spec);
    for (std::size_t s = 0; s < net.size(); ++s) {
      if (!is_eligible_start(net, s)) continue;
      for (const auto& pair : modified_dfs(net, s, raw))
        EXPECT_NO_THROW(subnetwork_from_layers(net, pair.member_ids)) << "seed " << seed;
    }
  }
}

TEST(EnumerateAll, Chain4HasTenIntervals) {
  auto subs = enumerate_all(chain4());
  EXPECT_EQ(subs.size(), 10u);
}

TEST(EnumerateAll, DiamondMatchesOracle) {
  IdSets expected{{"l0"}, {"l0", "l1", "l2", "l3"}, {"l1"}, {"l2"}};
  EXPECT_EQ(testing::oracle_sets(diamond()), expected);
  EXPECT_EQ(member_sets(enumerate_all(diamond())), expected);
  EXPECT_EQ(member_sets(brute_force_enumerate(diamond())), expected);
}

TEST(EnumerateAll, SingleLayer) {
  Network one("one", {testing::make_layer("x", LayerKind::conv, 4, 4)}, {}, {"x"}, {"x"});
  EXPECT_EQ(enumerate_all(one).size(), 1u);
}

TEST(EnumerateAll, RotationUnionAddsNothing) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    GenSpec spec;
    spec.layers = 8;
    spec.edge_prob = 0.4;
    spec.seed = seed;
    auto net = gen_network(spec);
    EnumerateOptions rot;
    rot.union_rotations = true;
    EXPECT_EQ(member_sets(enumerate_all(net)), member_sets(enumerate_all(net, rot)));
  }
}

TEST(BruteForce, IsolatedLayers) {
  Network iso("iso",
              {testing::make_layer("x", LayerKind::input, 4, 4), testing::make_layer("y", LayerKind::input, 4, 4),
               testing::make_layer("z", LayerKind::input, 4, 4)},
              {}, {"x", "y", "z"}, {"x", "y", "z"});
  EXPECT_EQ(member_sets(brute_force_enumerate(iso)), (IdSets{{"x"}, {"y"}, {"z"}}));
  EXPECT_EQ(member_sets(enumerate_all(iso)), (IdSets{{"x"}, {"y"}, {"z"}}));
}

TEST(BruteForce, Chain4AgreesWithEnumeration) {
  EXPECT_EQ(member_sets(brute_force_enumerate(chain4())), member_sets(enumerate_all(chain4())));
}

TEST(BruteForce, CapEnforced) {
  EXPECT_THROW(brute_force_enumerate(testing::chain(15)), TooLarge);
  EXPECT_NO_THROW(brute_force_enumerate(testing::chain(5), 5));
  EXPECT_THROW(brute_force_enumerate(testing::chain(6), 5), TooLarge);
}

TEST(BruteForce, AgreesWithIndependentEdgeOracle) {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    GenSpec spec;
    spec.layers = 3 + static_cast<std::int64_t>(seed % 7);
    spec.edge_prob = 0.3;
    spec.channel_palette = {16};
    spec.seed = seed;
    auto net = gen_network(spec);
    EXPECT_EQ(member_sets(brute_force_enumerate(net)), testing::oracle_sets(net)) << "seed " << seed;
  }
}

}  // namespace
}  // namespace blockswap
