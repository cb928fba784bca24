#include "test_support.hpp"

#include <gtest/gtest.h>

namespace blockswap {
namespace {

TEST(GenNetwork, SingleLayer) {
  GenSpec g;
  g.layers = 1;
  auto net = gen_network(g);
  EXPECT_EQ(net.size(), 1u);
  EXPECT_TRUE(validate_network(net).empty());
}

TEST(GenNetwork, Deterministic) {
  GenSpec g;
  g.layers = 12;
  g.seed = 42;
  g.stride_positions = {2, 7};
  EXPECT_EQ(serialize_network(gen_network(g)), serialize_network(gen_network(g)));
  auto other = g;
  other.seed = 43;
  EXPECT_NE(serialize_network(gen_network(g)), serialize_network(gen_network(other)));
}

TEST(GenNetwork, ThousandNetworksValidate) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    GenSpec g;
    g.layers = 1 + static_cast<std::int64_t>(seed % 15);
    g.edge_prob = 0.15 + 0.05 * static_cast<double>(seed % 10);
    g.stride_positions = {static_cast<std::int64_t>(seed % 5), static_cast<std::int64_t>(seed % 11)};
    g.seed = seed;
    auto report = validate_network(gen_network(g));
    ASSERT_TRUE(report.empty()) << "seed " << seed << ": " << report.front().rule << " " << report.front().subject;
  }
}

TEST(GenNetwork, RejectsBadSpec) {
  GenSpec g;
  g.layers = 0;
  EXPECT_THROW(gen_network(g), std::invalid_argument);
  g.layers = 3;
  g.channel_palette.clear();
  EXPECT_THROW(gen_network(g), std::invalid_argument);
}

TEST(GenNetwork, SpecFromJson) {
  auto spec = gen_spec_from_json(parse_json_text(R"({"layers": 5, "channel_palette": [4], "seed": 9})"));
  EXPECT_EQ(spec.layers, 5);
  EXPECT_EQ(spec.channel_palette, (std::vector<std::int64_t>{4}));
  EXPECT_EQ(spec.seed, 9u);
  EXPECT_THROW(gen_spec_from_json(parse_json_text(R"({"seed": 1})")), SchemaViolation);
}

TEST(GenPool, ZeroVariants) {
  PoolSpec p;
  p.variants = 0;
  EXPECT_TRUE(gen_pool(testing::chain4(), p).empty());
}

TEST(GenPool, DoubleWidthChain) {
  PoolSpec p;
  p.variants = 1;
  p.scale_factors = {2};
  p.depth_prob = 0;
  auto pool = gen_pool(testing::chain4(), p);
  ASSERT_EQ(pool.size(), 1u);
  for (const auto& l : pool[0].layers()) {
    EXPECT_EQ(l.in_channels, 16);
    EXPECT_EQ(l.out_channels, 16);
  }
  EXPECT_EQ(pool[0].layer("b").cost.flops, 4 * testing::chain4().layer("b").cost.flops);
  EXPECT_TRUE(validate_network(pool[0]).empty());
}

TEST(GenPool, VariantsValidateAndFeedTheHouse) {
  GenSpec g;
  g.layers = 10;
  g.seed = 5;
  auto teacher = gen_network(g);
  PoolSpec p;
  p.variants = 5;
  p.seed = 5;
  auto pool = gen_pool(teacher, p);
  ASSERT_EQ(pool.size(), 5u);
  for (const auto& v : pool) EXPECT_TRUE(validate_network(v).empty()) << v.name();
  HouseParams hp;
  hp.n_t = 10;
  hp.n_p = 10;
  hp.seed = 5;
  auto house = construct(teacher, pool, hp);
  EXPECT_TRUE(std::any_of(house.alternatives.begin(), house.alternatives.end(),
                          [](const Alternative& a) { return a.origin == Origin::pretrained; }));
}

}  // namespace
}  // namespace blockswap
