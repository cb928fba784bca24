#include "test_support.hpp"

#include <gtest/gtest.h>

namespace blockswap {
namespace {

struct AltSpec {
  std::string id;
  std::vector<std::string> target;
  std::int64_t metric;
  Rational dacc{0};
};

struct Fixture {
  ModelHouse house;
  Profile profile;
};

// Alternatives over CHAIN4 (layer flops a=100, b=200, c=300, d=400, total 1000).
Fixture handmade(const std::vector<AltSpec>& specs, Rational requirement, Rational lambda = Rational(1)) {
  Fixture f;
  f.house.teacher = testing::chain4();
  f.profile.teacher_metric = network_metric(f.house.teacher, "flops");
  f.profile.requirement = requirement;
  f.profile.lambda = lambda;
  std::map<std::vector<std::string>, std::string> target_ids;
  for (const auto& s : specs) {
    auto [it, fresh] = target_ids.emplace(s.target, make_id('T', target_ids.size()));
    if (fresh) {
      f.house.teacher_subnets[it->second] = subnetwork_from_layers(f.house.teacher, s.target);
      f.profile.subnet_metrics[it->second] = metric_of(f.house.teacher_subnets[it->second].cost, "flops");
    }
    Alternative a;
    a.id = s.id;
    a.target_id = it->second;
    a.subnet = f.house.teacher_subnets[it->second];
    f.house.alternatives.push_back(a);
    f.profile.subnet_metrics[s.id] = Rational(s.metric);
    f.profile.dacc[s.id] = s.dacc;
  }
  std::sort(f.house.alternatives.begin(), f.house.alternatives.end(),
            [](const Alternative& x, const Alternative& y) { return x.id < y.id; });
  return f;
}

ModelHouse generated_house(std::uint64_t seed) {
  GenSpec g;
  g.layers = 10;
  g.edge_prob = 0.25;
  g.seed = seed;
  auto teacher = gen_network(g);
  PoolSpec ps;
  ps.seed = seed;
  HouseParams hp;
  hp.n_t = 8;
  hp.n_p = 20;
  hp.r = Rational(1, 2);
  hp.seed = seed;
  return expand(construct(teacher, gen_pool(teacher, ps), hp), 10, {}, seed);
}

TEST(Greedy, IdentityOnlyStaysEmpty) {
  auto f = handmade({{"A0", {"a", "b"}, 300}, {"A1", {"c"}, 300}}, Rational(1000));
  SearchProblem prob(f.house, f.profile);
  auto s = greedy_init(prob);
  EXPECT_TRUE(s.plan.empty());
  EXPECT_EQ(s.score, Rational(1));
}

TEST(Greedy, TakesTheUniqueImprovement) {
  auto f = handmade({{"A0", {"a", "b", "c", "d"}, 500}}, Rational(500));
  SearchProblem prob(f.house, f.profile);
  auto s = greedy_init(prob);
  EXPECT_EQ(prob.plan_ids(s), (std::vector<std::string>{"A0"}));
  EXPECT_EQ(s.score, Rational(1));
}

TEST(Greedy, OverlapPicksBetterThenLowerId) {
  auto f = handmade({{"A0", {"b", "c"}, 400}, {"A1", {"c", "d"}, 300}}, Rational(100));
  SearchProblem prob(f.house, f.profile);
  EXPECT_EQ(prob.plan_ids(greedy_init(prob)), (std::vector<std::string>{"A1"}));

  // A0: 1000-500+300 = 800; A1: 1000-700+500 = 800. Equal scores.
  auto tie = handmade({{"A0", {"b", "c"}, 300}, {"A1", {"c", "d"}, 500}}, Rational(100));
  SearchProblem tprob(tie.house, tie.profile);
  EXPECT_EQ(tprob.plan_ids(greedy_init(tprob)), (std::vector<std::string>{"A0"}));
}

TEST(Neighbor, AllConflictingGivesOneMember) {
  auto f = handmade({{"A0", {"b"}, 1}, {"A1", {"b", "c"}, 1}, {"A2", {"a", "b"}, 1}}, Rational(100));
  SearchProblem prob(f.house, f.profile);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) EXPECT_EQ(neighbor(prob.empty(), prob, rng).plan.size(), 1u);
}

TEST(Neighbor, SingleAlternativeNeverDoubles) {
  auto f = handmade({{"A0", {"b"}, 1}}, Rational(100));
  SearchProblem prob(f.house, f.profile);
  auto one = prob.empty();
  prob.add(one, 0);
  Rng rng(5);
  for (int i = 0; i < 200; ++i) EXPECT_LE(neighbor(one, prob, rng).plan.size(), 1u);
}

TEST(Neighbor, FeasibleAndCacheMatchesColdOverManyTrials) {
  auto house = generated_house(17);
  auto profile = synth_profile(house, {});
  SearchProblem prob(house, profile);
  ASSERT_GT(prob.size(), 3u);
  Rng rng(99);
  auto cur = prob.empty();
  for (int i = 0; i < 10000; ++i) {
    cur = neighbor(cur, prob, rng);
    ASSERT_TRUE(prob.feasible(cur.plan));
    auto cold = prob.evaluate(cur.plan);
    ASSERT_EQ(cold.score, cur.score);
    ASSERT_EQ(cold.metric, cur.metric);
    ASSERT_EQ(cold.occupied, cur.occupied);
    ASSERT_EQ(cur.metric, incremental_metric(profile, prob.plan_ids(cur), house));
  }
}

TEST(Anneal, ZeroIterationsReturnsGreedy) {
  auto house = generated_house(4);
  auto profile = synth_profile(house, {});
  SearchProblem prob(house, profile);
  AnnealConfig cfg;
  cfg.iterations = 0;
  auto res = anneal(prob, cfg);
  EXPECT_EQ(res.best.plan, greedy_init(prob).plan);
  EXPECT_TRUE(res.trace.empty());
}

TEST(Anneal, NeverWorseThanGreedyAndDeterministic) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto house = generated_house(seed);
    auto profile = synth_profile(house, {});
    SearchProblem prob(house, profile);
    AnnealConfig cfg;
    cfg.iterations = 500;
    cfg.restarts = 3;
    cfg.seed = seed;
    auto a = anneal(prob, cfg);
    auto b = anneal(prob, cfg);
    EXPECT_LE(a.best.score, a.initial.score);
    EXPECT_EQ(a.best.plan, b.best.plan);
    EXPECT_EQ(trace_to_jsonl(a.trace), trace_to_jsonl(b.trace));
    for (const auto& t : a.trace) EXPECT_LE(a.best.score, t.score);
  }
}

TEST(Anneal, SerialAndParallelAgree) {
  auto house = generated_house(12);
  auto profile = synth_profile(house, {});
  SearchProblem prob(house, profile);
  AnnealConfig cfg;
  cfg.iterations = 400;
  cfg.restarts = 4;
  cfg.seed = 77;
  auto serial = anneal(prob, cfg);
  cfg.parallel = true;
  auto parallel = anneal(prob, cfg);
  EXPECT_EQ(serial.best.plan, parallel.best.plan);
  EXPECT_EQ(serial.best_chain, parallel.best_chain);
  EXPECT_EQ(trace_to_jsonl(serial.trace), trace_to_jsonl(parallel.trace));
}

TEST(Anneal, FrozenTemperatureNeverGoesUphill) {
  auto house = generated_house(8);
  auto profile = synth_profile(house, {});
  SearchProblem prob(house, profile);
  AnnealConfig cfg;
  cfg.iterations = 2000;
  cfg.initial_temperature = Rational(1, 1000000000);
  cfg.seed = 1;
  auto res = anneal(prob, cfg);
  Rational prev = res.initial.score;
  for (const auto& t : res.trace) {
    if (t.accepted) {
      EXPECT_LE(t.candidate_score, prev);
    }
    prev = t.score;
  }
}

TEST(Exhaustive, Examples) {
  auto none = handmade({}, Rational(500));
  SearchProblem p0(none.house, none.profile);
  EXPECT_TRUE(exhaustive_search(p0).plan.empty());

  auto one = handmade({{"A0", {"a", "b"}, 100}}, Rational(500));
  SearchProblem p1(one.house, one.profile);
  EXPECT_EQ(p1.plan_ids(exhaustive_search(p1)), (std::vector<std::string>{"A0"}));

  // Pairwise conflicts: feasible plans are {}, {A0}, {A1}, {A2}; metrics 1000, 900, 750, 850.
  auto tri = handmade({{"A0", {"b"}, 100}, {"A1", {"b", "c"}, 250}, {"A2", {"a", "b"}, 150}}, Rational(100));
  SearchProblem p3(tri.house, tri.profile);
  auto best = exhaustive_search(p3);
  EXPECT_EQ(p3.plan_ids(best), (std::vector<std::string>{"A1"}));
  EXPECT_EQ(best.metric, Rational(750));
}

TEST(Exhaustive, CapEnforced) {
  std::vector<AltSpec> many;
  for (int i = 0; i < 5; ++i) many.push_back({make_id('A', static_cast<std::size_t>(i)), {"a"}, 50});
  auto f = handmade(many, Rational(100));
  SearchProblem prob(f.house, f.profile);
  EXPECT_THROW(exhaustive_search(prob, 4), TooLarge);
}

TEST(TeacherOnly, FiltersOrigins) {
  auto house = generated_house(21);
  auto profile = synth_profile(house, {});
  SearchProblem prob(house, profile, SearchOptions{true});
  for (std::size_t i = 0; i < prob.size(); ++i) EXPECT_EQ(prob.alternative(i).origin, Origin::teacher);
  EXPECT_EQ(prob.size(), house.teacher_subnets.size());
}

TEST(PlanJson, RoundTrip) {
  auto f = handmade({{"A0", {"a", "b"}, 100}}, Rational(500));
  SearchProblem prob(f.house, f.profile);
  auto s = greedy_init(prob);
  auto doc = plan_from_json(plan_to_json(prob, s));
  EXPECT_EQ(doc.plan, prob.plan_ids(s));
  EXPECT_EQ(doc.score, s.score);
}

}  // namespace
}  // namespace blockswap
