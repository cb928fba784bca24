#pragma once

// Replacement-plan search: greedy steepest-descent seeding followed by simulated
// annealing over feasible plans (plans whose target regions are pairwise disjoint).

#include <blockswap/cost_profile.hpp>
#include <blockswap/errors.hpp>
#include <blockswap/json_io.hpp>
#include <blockswap/model_house.hpp>
#include <blockswap/random.hpp>
#include <blockswap/rational.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace blockswap {

/// Fixed-width bit set over teacher layer indices.
class LayerSet {
 public:
  LayerSet() = default;
  explicit LayerSet(std::size_t bits) : words_((bits + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return words_[i / 64] >> (i % 64) & 1; }
  bool intersects(const LayerSet& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & o.words_[w]) return true;
    return false;
  }
  LayerSet& operator|=(const LayerSet& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
    return *this;
  }
  void subtract(const LayerSet& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~o.words_[w];
  }
  friend bool operator==(const LayerSet&, const LayerSet&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

/// A plan over the problem's alternative indices with its cached evaluation.
struct Solution {
  std::vector<std::size_t> plan;  // sorted indices into SearchProblem
  Rational metric;
  Rational dacc_sum;
  Rational score;
  LayerSet occupied;
};

struct SearchOptions {
  /// Restrict the alternative set to teacher-origin blocks.
  bool teacher_only = false;
};

/// A model house and profile compiled for fast incremental scoring.
class SearchProblem {
 public:
  SearchProblem(const ModelHouse& house, const Profile& profile, SearchOptions opts = {})
      : house_(&house), teacher_metric_(profile.teacher_metric), requirement_(profile.requirement),
        lambda_(profile.lambda), n_layers_(house.teacher.size()) {
    check_profile_covers(profile, house);
    for (const auto& a : house.alternatives) {
      if (opts.teacher_only && a.origin != Origin::teacher) continue;
      alts_.push_back(&a);
      const auto& target = house.target_of(a);
      LayerSet region(n_layers_);
      for (const auto& id : target.layer_ids) {
        auto i = house.teacher.index_of(id);
        if (i == kNoLayer) throw TargetNotIntact("target " + a.target_id + " refers to unknown layer " + id);
        region.set(i);
      }
      regions_.push_back(std::move(region));
      delta_metric_.push_back(profile.subnet_metrics.at(a.id) - profile.subnet_metrics.at(a.target_id));
      dacc_.push_back(profile.dacc.at(a.id));
    }
  }

  std::size_t size() const { return alts_.size(); }
  const Alternative& alternative(std::size_t i) const { return *alts_.at(i); }
  const std::string& id(std::size_t i) const { return alts_.at(i)->id; }
  const ModelHouse& house() const { return *house_; }

  Rational score_of(const Rational& metric, const Rational& dacc) const {
    return blockswap::score_of(metric, dacc, requirement_, lambda_);
  }

  Solution empty() const {
    Solution s;
    s.metric = teacher_metric_;
    s.dacc_sum = Rational(0);
    s.score = score_of(s.metric, s.dacc_sum);
    s.occupied = LayerSet(n_layers_);
    return s;
  }

  bool can_add(const Solution& s, std::size_t i) const { return !s.occupied.intersects(regions_[i]); }

  /// Score the plan would have after adding alternative i (no feasibility check).
  Rational score_with(const Solution& s, std::size_t i) const {
    return score_of(s.metric + delta_metric_[i], s.dacc_sum + dacc_[i]);
  }

  void add(Solution& s, std::size_t i) const {
    s.plan.insert(std::upper_bound(s.plan.begin(), s.plan.end(), i), i);
    s.metric += delta_metric_[i];
    s.dacc_sum += dacc_[i];
    s.score = score_of(s.metric, s.dacc_sum);
    s.occupied |= regions_[i];
  }

  /// Removes the member at position `pos` of s.plan.
  void remove_at(Solution& s, std::size_t pos) const {
    auto i = s.plan.at(pos);
    s.plan.erase(s.plan.begin() + static_cast<std::ptrdiff_t>(pos));
    s.metric -= delta_metric_[i];
    s.dacc_sum -= dacc_[i];
    s.score = score_of(s.metric, s.dacc_sum);
    s.occupied.subtract(regions_[i]);
  }

  /// Pairwise-disjoint target regions, recomputed from scratch.
  bool feasible(const std::vector<std::size_t>& plan) const {
    for (std::size_t a = 0; a < plan.size(); ++a)
      for (std::size_t b = a + 1; b < plan.size(); ++b)
        if (plan[a] == plan[b] || regions_[plan[a]].intersects(regions_[plan[b]])) return false;
    return true;
  }

  /// Cold evaluation of a plan, ignoring any cache.
  Solution evaluate(std::vector<std::size_t> plan) const {
    std::sort(plan.begin(), plan.end());
    Solution s = empty();
    for (auto i : plan) {
      s.plan.push_back(i);
      s.metric += delta_metric_[i];
      s.dacc_sum += dacc_[i];
      s.occupied |= regions_[i];
    }
    s.score = score_of(s.metric, s.dacc_sum);
    return s;
  }

  std::vector<std::string> plan_ids(const Solution& s) const {
    std::vector<std::string> ids;
    for (auto i : s.plan) ids.push_back(id(i));
    std::sort(ids.begin(), ids.end());
    return ids;
  }

  std::optional<std::size_t> index_of(std::string_view alt_id) const {
    for (std::size_t i = 0; i < alts_.size(); ++i)
      if (alts_[i]->id == alt_id) return i;
    return std::nullopt;
  }

 private:
  const ModelHouse* house_;
  Rational teacher_metric_;
  Rational requirement_;
  Rational lambda_;
  std::size_t n_layers_;
  std::vector<const Alternative*> alts_;  // sorted by id
  std::vector<LayerSet> regions_;
  std::vector<Rational> delta_metric_;
  std::vector<Rational> dacc_;
};

/// Lexicographic comparison of two plans by alternative id.
inline bool plan_less(const SearchProblem& p, const Solution& a, const Solution& b) {
  return p.plan_ids(a) < p.plan_ids(b);
}

/// Steepest descent from the empty plan; ties go to the lower alternative id.
inline Solution greedy_init(const SearchProblem& problem) {
  Solution cur = problem.empty();
  for (;;) {
    std::optional<std::size_t> best;
    Rational best_score;
    for (std::size_t i = 0; i < problem.size(); ++i) {
      if (!problem.can_add(cur, i)) continue;
      auto s = problem.score_with(cur, i);
      if (s < cur.score && (!best || s < best_score)) {
        best = i;
        best_score = s;
      }
    }
    if (!best) return cur;
    problem.add(cur, *best);
  }
}

struct NeighborOptions {
  /// Infeasible draws tolerated before stopping; 0 stops at the first one.
  std::size_t retry_draws = 0;
};

/// Drops one member uniformly at random, then keeps adding uniformly drawn
/// alternatives until a draw would break feasibility.
inline Solution neighbor(const Solution& sol, const SearchProblem& problem, Rng& rng, const NeighborOptions& opts = {}) {
  Solution next = sol;
  if (!next.plan.empty()) problem.remove_at(next, rng.index(next.plan.size()));
  if (problem.size() == 0) return next;
  std::size_t retries = opts.retry_draws;
  for (;;) {
    auto i = rng.index(problem.size());
    if (problem.can_add(next, i)) {
      problem.add(next, i);
    } else if (retries > 0) {
      --retries;
    } else {
      break;
    }
  }
  return next;
}

struct AnnealConfig {
  std::int64_t iterations = 5000;
  Rational initial_temperature{1};
  Rational cooling{97, 100};
  std::int64_t cooling_interval = 50;
  std::int64_t restarts = 1;  // number of independent chains; 0 behaves like 1
  std::uint64_t seed = 0;
  bool parallel = false;
  bool record_trace = true;
  NeighborOptions neighbor;
};

struct TraceEntry {
  std::size_t chain = 0;
  std::int64_t iteration = 0;
  double temperature = 0;
  Rational candidate_score;
  Rational score;  // current score after the step
  bool accepted = false;
};

struct AnnealResult {
  Solution initial;
  Solution best;
  std::size_t best_chain = 0;
  std::vector<TraceEntry> trace;
};

namespace search_detail {

struct ChainResult {
  Solution best;
  std::vector<TraceEntry> trace;
};

inline ChainResult run_chain(const SearchProblem& problem, const Solution& start, const AnnealConfig& cfg,
                             std::size_t chain) {
  Rng rng(derive_seed(cfg.seed, chain));
  ChainResult out;
  out.best = start;
  Solution cur = start;
  double temperature = cfg.initial_temperature.to_double();
  const double cooling = cfg.cooling.to_double();
  if (cfg.record_trace) out.trace.reserve(static_cast<std::size_t>(std::max<std::int64_t>(cfg.iterations, 0)));
  for (std::int64_t it = 0; it < cfg.iterations; ++it) {
    Solution cand = neighbor(cur, problem, rng, cfg.neighbor);
    const Rational delta = cand.score - cur.score;
    bool accept = delta.sign() <= 0;
    if (!accept) accept = rng.unit() < std::exp(-delta.to_double() / temperature);
    if (cfg.record_trace) out.trace.push_back({chain, it, temperature, cand.score, accept ? cand.score : cur.score, accept});
    if (accept) {
      cur = std::move(cand);
      if (cur.score < out.best.score) out.best = cur;
    }
    if (cfg.cooling_interval > 0 && (it + 1) % cfg.cooling_interval == 0) temperature *= cooling;
  }
  return out;
}

}  // namespace search_detail

/// Multi-chain annealing from the greedy plan. Chains use seeds derived from cfg.seed
/// and are merged by (score, plan ids), so serial and parallel runs agree exactly.
inline AnnealResult anneal(const SearchProblem& problem, const AnnealConfig& cfg) {
  if (cfg.initial_temperature.sign() <= 0) throw std::invalid_argument("initial temperature must be positive");
  if (cfg.cooling.sign() <= 0 || cfg.cooling >= Rational(1)) throw std::invalid_argument("cooling must lie in (0,1)");
  AnnealResult res;
  res.initial = greedy_init(problem);
  const auto chains = static_cast<std::size_t>(std::max<std::int64_t>(cfg.restarts, 1));
  std::vector<search_detail::ChainResult> results(chains);
  if (cfg.parallel && chains > 1) {
    std::vector<std::thread> workers;
    workers.reserve(chains);
    for (std::size_t c = 0; c < chains; ++c)
      workers.emplace_back([&, c] { results[c] = search_detail::run_chain(problem, res.initial, cfg, c); });
    for (auto& w : workers) w.join();
  } else {
    for (std::size_t c = 0; c < chains; ++c) results[c] = search_detail::run_chain(problem, res.initial, cfg, c);
  }
  res.best = res.initial;
  for (std::size_t c = 0; c < chains; ++c) {
    const auto& b = results[c].best;
    if (b.score < res.best.score || (b.score == res.best.score && plan_less(problem, b, res.best))) {
      res.best = b;
      res.best_chain = c;
    }
    res.trace.insert(res.trace.end(), results[c].trace.begin(), results[c].trace.end());
  }
  return res;
}

inline constexpr std::size_t kDefaultExhaustiveCap = 16;

/// Score-minimal feasible plan by enumeration; ties go to the lexicographically least plan.
inline Solution exhaustive_search(const SearchProblem& problem, std::size_t cap = kDefaultExhaustiveCap) {
  const auto n = problem.size();
  if (n > cap || n >= 63) throw TooLarge(std::to_string(n) + " alternatives exceeds cap " + std::to_string(cap));
  Solution best = problem.empty();
  std::vector<std::string> best_ids;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    Solution s = problem.empty();
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      if (!problem.can_add(s, i)) ok = false;
      else problem.add(s, i);
    }
    if (!ok) continue;
    if (s.score < best.score) {
      best = std::move(s);
      best_ids = problem.plan_ids(best);
    } else if (s.score == best.score) {
      auto ids = problem.plan_ids(s);
      if (ids < best_ids) {
        best = std::move(s);
        best_ids = std::move(ids);
      }
    }
  }
  return best;
}

/// Random feasible plan: alternatives in random order, each feasible one kept with probability 1/2.
inline Solution random_plan(const SearchProblem& problem, Rng& rng) {
  std::vector<std::size_t> order(problem.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  Solution s = problem.empty();
  for (auto i : order)
    if (rng.bernoulli(0.5) && problem.can_add(s, i)) problem.add(s, i);
  return s;
}

// ---------------------------------------------------------------------------

inline Json plan_to_json(const SearchProblem& problem, const Solution& s) {
  return Json{{"plan", problem.plan_ids(s)},
              {"score", s.score.str()},
              {"metric", s.metric.str()},
              {"dacc_sum", s.dacc_sum.str()}};
}

struct PlanDocument {
  std::vector<std::string> plan;
  Rational score;
  Rational metric;
  Rational dacc_sum;
};

inline PlanDocument plan_from_json(const Json& j) {
  using namespace json_detail;
  PlanDocument d;
  d.plan = as_string_list(field(j, "plan", "$"), "$.plan");
  std::sort(d.plan.begin(), d.plan.end());
  d.score = as_rational(field(j, "score", "$"), "$.score");
  d.metric = as_rational(field(j, "metric", "$"), "$.metric");
  d.dacc_sum = as_rational(field(j, "dacc_sum", "$"), "$.dacc_sum");
  return d;
}

inline std::string trace_to_jsonl(const std::vector<TraceEntry>& trace) {
  std::string out;
  for (const auto& t : trace) {
    Json j{{"chain", t.chain},
           {"iteration", t.iteration},
           {"temperature", t.temperature},
           {"candidate_score", t.candidate_score.str()},
           {"score", t.score.str()},
           {"accepted", t.accepted}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace blockswap
