#include "test_support.hpp"

#include <gtest/gtest.h>

namespace blockswap {
namespace {

using testing::chain4;
using testing::diamond;
using testing::make_layer;

SubNetwork shape(Rational spatial, std::int64_t cin, std::int64_t cout) {
  SubNetwork s;
  s.spatial_change = spatial;
  s.in_channels = cin;
  s.out_channels = cout;
  return s;
}

Alternative single_layer_alt(std::int64_t cin, std::int64_t cout, std::int64_t flops) {
  Network net("p", {make_layer("x", LayerKind::conv, cin, cout, flops)}, {}, {"x"}, {"x"});
  Alternative a;
  a.id = "A00000";
  a.subnet = subnetwork_from_layers(net, {"x"});
  a.origin = Origin::pretrained;
  return a;
}

TEST(Sampling, MinSizeFiltersSingletons) {
  const std::set<std::vector<std::string>> allowed{{"a", "b"}, {"a", "b", "c"}, {"a", "b", "c", "d"},
                                                   {"b", "c"}, {"b", "c", "d"}, {"c", "d"}};
  auto net = chain4();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    auto s = subnet_sampling(net, Rational(1), 2, rng);
    EXPECT_TRUE(allowed.count(s.layer_ids)) << "seed " << seed;
  }
}

TEST(Sampling, RatioCutsPopOrderPrefix) {
  auto net = chain4();
  std::set<std::vector<std::string>> seen;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    seen.insert(subnet_sampling(net, Rational(1, 2), 1, rng, net.index_of("a")).layer_ids);
  }
  EXPECT_EQ(seen, (std::set<std::vector<std::string>>{{"a"}, {"a", "b"}}));
}

TEST(Sampling, NoEligibleStart) {
  // Every layer has two inbound connections.
  std::vector<Layer> layers{make_layer("a", LayerKind::add, 8, 8), make_layer("b", LayerKind::add, 8, 8),
                            make_layer("c", LayerKind::add, 8, 8)};
  Network net("tri", layers, {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"b", "a"}, {"c", "b"}, {"a", "c"}}, {}, {});
  Rng rng(1);
  EXPECT_THROW(subnet_sampling(net, Rational(1), 1, rng), NoSubnetFound);
}

TEST(Sampling, RatioOutOfRange) {
  Rng rng(1);
  EXPECT_THROW(subnet_sampling(chain4(), Rational(0), 1, rng), std::invalid_argument);
  EXPECT_THROW(subnet_sampling(chain4(), Rational(3, 2), 1, rng), std::invalid_argument);
}

TEST(Compatibility, Examples) {
  const auto target = shape(Rational(1, 2), 32, 64);
  EXPECT_TRUE(is_compatible(shape(Rational(1, 2), 48, 64), target));
  EXPECT_FALSE(is_compatible(shape(Rational(1, 2), 16, 64), target));
  EXPECT_FALSE(is_compatible(shape(Rational(1, 4), 48, 96), target));
}

TEST(Construct, TeacherOnly) {
  HouseParams p;
  p.n_t = 3;
  p.n_p = 0;
  p.r = Rational(1);
  p.seed = 7;
  auto house = construct(chain4(), {}, p);
  EXPECT_EQ(house.teacher_subnets.size(), 3u);
  ASSERT_EQ(house.alternatives.size(), 3u);
  for (const auto& a : house.alternatives) {
    EXPECT_EQ(a.origin, Origin::teacher);
    EXPECT_FALSE(a.mask);
    EXPECT_EQ(a.subnet, house.target_of(a));
  }
  EXPECT_EQ(house.alternatives[0].id, "A00000");
  EXPECT_TRUE(house.teacher_subnets.count("T00002"));
  EXPECT_TRUE(check_house(house).empty());
}

TEST(Construct, TeacherAsDonorKeepsTeacherOrigin) {
  HouseParams p;
  p.n_t = 10;
  p.n_p = 20;
  p.r = Rational(1);
  p.seed = 5;
  auto house = construct(chain4(), {chain4()}, p);
  std::size_t non_identity = 0;
  for (const auto& a : house.alternatives) {
    EXPECT_EQ(a.origin, Origin::teacher);
    if (a.subnet.layer_ids != house.target_of(a).layer_ids) ++non_identity;
  }
  EXPECT_GT(non_identity, 0u);
  EXPECT_TRUE(check_house(house).empty());
}

TEST(Construct, WiderPretrainedGetsMaskedDownToTarget) {
  HouseParams p;
  p.n_t = 3;
  p.n_p = 1;
  p.r = Rational(1);
  p.seed = 3;
  auto house = construct(chain4(), {testing::chain(4, 16, "wide")}, p);
  std::vector<const Alternative*> pre;
  for (const auto& a : house.alternatives)
    if (a.origin == Origin::pretrained) pre.push_back(&a);
  ASSERT_EQ(pre.size(), 1u);
  ASSERT_TRUE(pre[0]->mask);
  EXPECT_EQ(popcount(pre[0]->mask->keep_in), 8);
  EXPECT_EQ(popcount(pre[0]->mask->keep_out), 8);
  EXPECT_EQ(pre[0]->subnet.source, "wide");
}

TEST(Construct, DiamondStopsAtItsSubnetworkCount) {
  HouseParams p;
  p.n_t = 10;
  p.n_p = 0;
  p.r = Rational(1);
  p.seed = 11;
  auto house = construct(diamond(), {}, p);
  EXPECT_EQ(house.teacher_subnets.size(), testing::oracle_sets(diamond()).size());
  EXPECT_FALSE(house.warnings.empty());
}

TEST(Construct, PretrainedRequested) {
  HouseParams p;
  p.n_p = 5;
  EXPECT_THROW(construct(chain4(), {}, p), EmptyPretrainedSet);
}

ModelHouse wide_house(std::uint64_t seed) {
  HouseParams p;
  p.n_t = 4;
  p.n_p = 6;
  p.r = Rational(1);
  p.seed = seed;
  return construct(chain4(), {testing::chain(4, 16, "wide"), testing::chain(4, 24, "wider")}, p);
}

TEST(Expand, ZeroIsIdentity) {
  auto house = wide_house(5);
  auto out = expand(house, 0, {}, 1);
  EXPECT_EQ(serialize_house(out), serialize_house(house));
}

TEST(Expand, ClonesAreNarrowedAndMaskedToTarget) {
  auto house = wide_house(5);
  auto out = expand(house, 10, {}, 9);
  EXPECT_TRUE(check_house(out).empty());
  std::size_t clones = 0;
  for (const auto& a : out.alternatives) {
    if (a.origin != Origin::expanded) continue;
    ++clones;
    const auto& t = out.target_of(a);
    if (!a.mask) {
      EXPECT_EQ(a.subnet.in_channels, t.in_channels);
      continue;
    }
    // Default rule keeps leading channels.
    EXPECT_EQ(a.mask->keep_in, keep_first(a.subnet.in_channels, t.in_channels));
    EXPECT_EQ(a.mask->keep_out, keep_first(a.subnet.out_channels, t.out_channels));
  }
  EXPECT_GT(clones, 0u);
}

TEST(Expand, Deterministic) {
  auto house = wide_house(5);
  EXPECT_EQ(serialize_house(expand(house, 8, {}, 4)), serialize_house(expand(house, 8, {}, 4)));
}

TEST(Expand, ScoresChooseKeptChannels) {
  EXPECT_EQ(keep_top({0.1, 0.9, 0.5, 0.9}, 2), (std::vector<bool>{false, true, false, true}));
  EXPECT_EQ(keep_first(4, 1), (std::vector<bool>{true, false, false, false}));
}

TEST(Mask, PopcountBecomesWidth) {
  auto a = single_layer_alt(64, 64, 4096);
  a.mask = ChannelMask{std::vector<bool>(64, true), keep_first(64, 48)};
  auto sub = apply_mask(a);
  EXPECT_EQ(sub.out_channels, 48);
  EXPECT_EQ(sub.in_channels, 64);
  EXPECT_EQ(sub.layers[0].out_channels, 48);
}

TEST(Mask, FullMaskIsIdentity) {
  auto a = single_layer_alt(16, 16, 1000);
  a.mask = ChannelMask{std::vector<bool>(16, true), std::vector<bool>(16, true)};
  EXPECT_EQ(apply_mask(a), a.subnet);
}

TEST(Mask, CostRescale) {
  auto a = single_layer_alt(16, 16, 1000);
  a.mask = ChannelMask{keep_first(16, 8), std::vector<bool>(16, true)};
  auto sub = apply_mask(a);
  EXPECT_EQ(sub.layers[0].cost.flops, 500);
  EXPECT_EQ(sub.cost.flops, 500);
  EXPECT_EQ(sub.layers[0].cost.latency_us, a.subnet.layers[0].cost.latency_us);
}

TEST(Mask, LengthMismatch) {
  auto a = single_layer_alt(16, 16, 1000);
  a.mask = ChannelMask{keep_first(8, 8), std::vector<bool>(16, true)};
  EXPECT_THROW(apply_mask(a), MaskLengthMismatch);
}

TEST(HouseJson, RoundTripIsByteStable) {
  auto house = expand(wide_house(21), 6, {}, 2);
  auto text = serialize_house(house);
  auto back = parse_house(text);
  EXPECT_EQ(back.alternatives, house.alternatives);
  EXPECT_EQ(back.teacher_subnets, house.teacher_subnets);
  EXPECT_EQ(back.params, house.params);
  EXPECT_EQ(serialize_house(back), text);
}

TEST(HouseJson, SameSeedSameBytes) {
  EXPECT_EQ(serialize_house(wide_house(8)), serialize_house(wide_house(8)));
}

TEST(HouseJson, UnknownTargetRejected) {
  auto j = house_to_json(wide_house(8));
  j["alternatives"][0]["target_id"] = "T99999";
  EXPECT_THROW(house_from_json(j), SchemaViolation);
}

}  // namespace
}  // namespace blockswap
