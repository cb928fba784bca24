#pragma once

// Metric and accuracy-loss data for a model house, and the plan score:
//   metric(plan) = metric(teacher) + sum over A of (metric(A) - metric(target(A)))
//   score(plan)  = max(1, metric(plan) / R) + lambda * sum over A of dacc(A)
// Lower scores are better.

#include <blockswap/errors.hpp>
#include <blockswap/graph.hpp>
#include <blockswap/json_io.hpp>
#include <blockswap/model_house.hpp>
#include <blockswap/random.hpp>
#include <blockswap/rational.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace blockswap {

struct Profile {
  std::string metric_name = "flops";
  Rational teacher_metric{1};
  std::map<std::string, Rational> subnet_metrics;  // teacher sub-network and alternative ids
  std::map<std::string, Rational> dacc;            // alternative ids; >= 0 means accuracy loss
  Rational requirement{1};
  Rational lambda{0};

  friend bool operator==(const Profile&, const Profile&) = default;
};

/// Reads one scalar metric out of a cost vector: "flops", "params" or "latency_us:<device>".
inline Rational metric_of(const CostVector& cost, std::string_view metric_name) {
  if (metric_name == "flops") return Rational(cost.flops);
  if (metric_name == "params") return Rational(cost.params);
  constexpr std::string_view prefix = "latency_us:";
  if (metric_name.substr(0, prefix.size()) == prefix) {
    auto it = cost.latency_us.find(std::string(metric_name.substr(prefix.size())));
    return it == cost.latency_us.end() ? Rational(0) : it->second;
  }
  throw std::invalid_argument("unknown metric '" + std::string(metric_name) + "'");
}

inline Rational network_metric(const Network& net, std::string_view metric_name) {
  Rational total(0);
  for (const auto& l : net.layers()) total += metric_of(l.cost, metric_name);
  return total;
}

/// Throws UnknownAlternative naming the first id the profile does not cover.
inline void check_profile_covers(const Profile& profile, const ModelHouse& house) {
  for (const auto& [id, sub] : house.teacher_subnets)
    if (!profile.subnet_metrics.count(id)) throw UnknownAlternative("profile has no metric for sub-network " + id);
  for (const auto& a : house.alternatives) {
    if (!profile.subnet_metrics.count(a.id)) throw UnknownAlternative("profile has no metric for " + a.id);
    if (!profile.dacc.count(a.id)) throw UnknownAlternative("profile has no accuracy loss for " + a.id);
  }
}

inline const Rational& lookup(const std::map<std::string, Rational>& m, const std::string& id, const char* what) {
  auto it = m.find(id);
  if (it == m.end()) throw UnknownAlternative(std::string("no ") + what + " for '" + id + "'");
  return it->second;
}

inline Rational incremental_metric(const Profile& profile, const std::vector<std::string>& plan,
                                   const ModelHouse& house) {
  Rational total = profile.teacher_metric;
  for (const auto& id : plan) {
    const auto* alt = house.find(id);
    if (!alt) throw UnknownAlternative("'" + id + "' is not in the model house");
    total += lookup(profile.subnet_metrics, id, "metric");
    total -= lookup(profile.subnet_metrics, alt->target_id, "metric");
  }
  return total;
}

inline Rational dacc_sum(const Profile& profile, const std::vector<std::string>& plan, const ModelHouse& house) {
  Rational total(0);
  for (const auto& id : plan) {
    if (!house.find(id)) throw UnknownAlternative("'" + id + "' is not in the model house");
    total += lookup(profile.dacc, id, "accuracy loss");
  }
  return total;
}

inline Rational score_of(const Rational& metric, const Rational& dacc_total, const Rational& requirement,
                         const Rational& lambda) {
  return max(Rational(1), metric / requirement) + lambda * dacc_total;
}

inline Rational score(const Profile& profile, const std::vector<std::string>& plan, const ModelHouse& house) {
  return score_of(incremental_metric(profile, plan, house), dacc_sum(profile, plan, house), profile.requirement,
                  profile.lambda);
}

struct SynthProfileParams {
  std::string metric_name = "flops";
  Rational dacc_max{1, 20};           // dacc ~ U[0, dacc_max] * cost-reduction ratio
  Rational requirement_ratio{1, 2};   // R = ratio * metric(teacher) unless `requirement` is set
  std::optional<Rational> requirement;
  Rational lambda{1};
  std::uint64_t seed = 0;
};

/// Additive stand-in for measured data: every metric is the member-layer sum of the
/// block as it would be spliced in (masks applied).
inline Profile synth_profile(const ModelHouse& house, const SynthProfileParams& params) {
  Rng rng(params.seed);
  Profile p;
  p.metric_name = params.metric_name;
  p.teacher_metric = network_metric(house.teacher, params.metric_name);
  if (p.teacher_metric.sign() <= 0) throw std::invalid_argument("teacher metric must be positive");
  p.requirement = params.requirement ? *params.requirement : p.teacher_metric * params.requirement_ratio;
  p.lambda = params.lambda;
  for (const auto& [id, sub] : house.teacher_subnets) p.subnet_metrics[id] = metric_of(sub.cost, params.metric_name);
  constexpr std::int64_t kSteps = 10000;
  for (const auto& a : house.alternatives) {
    const auto m = metric_of(apply_mask(a).cost, params.metric_name);
    p.subnet_metrics[a.id] = m;
    const Rational u = params.dacc_max * Rational(rng.between(0, kSteps), kSteps);  // drawn for every id
    const auto& target_metric = p.subnet_metrics.at(a.target_id);
    Rational ratio(0);
    if (target_metric.sign() > 0 && m < target_metric) ratio = (target_metric - m) / target_metric;
    p.dacc[a.id] = a.subnet == house.target_of(a) ? Rational(0) : u * ratio;
  }
  return p;
}

inline Json profile_to_json(const Profile& p) {
  Json metrics = Json::object();
  for (const auto& [id, v] : p.subnet_metrics) metrics[id] = v.str();
  Json dacc = Json::object();
  for (const auto& [id, v] : p.dacc) dacc[id] = v.str();
  return Json{{"metric_name", p.metric_name},
              {"teacher_metric", p.teacher_metric.str()},
              {"requirement", p.requirement.str()},
              {"lambda", p.lambda.str()},
              {"subnet_metrics", metrics},
              {"dacc", dacc}};
}

inline Profile profile_from_json(const Json& j) {
  using namespace json_detail;
  Profile p;
  p.metric_name = as_string(field(j, "metric_name", "$"), "$.metric_name");
  p.teacher_metric = as_rational(field(j, "teacher_metric", "$"), "$.teacher_metric");
  p.requirement = as_rational(field(j, "requirement", "$"), "$.requirement");
  p.lambda = as_rational(field(j, "lambda", "$"), "$.lambda");
  if (p.teacher_metric.sign() <= 0) throw SchemaViolation("$.teacher_metric", "must be positive");
  if (p.requirement.sign() <= 0) throw SchemaViolation("$.requirement", "must be positive");
  if (p.lambda.sign() < 0) throw SchemaViolation("$.lambda", "must be non-negative");
  for (const auto* key : {"subnet_metrics", "dacc"}) {
    const auto& obj = field(j, key, "$");
    if (!obj.is_object()) throw SchemaViolation(std::string("$.") + key, "expected object");
    const bool is_metric = std::string(key) == "subnet_metrics";
    auto& dest = is_metric ? p.subnet_metrics : p.dacc;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      auto path = std::string("$.") + key + "." + it.key();
      dest[it.key()] = as_rational(it.value(), path);
      if (is_metric && dest[it.key()].sign() < 0) throw SchemaViolation(path, "metric must be >= 0");
    }
  }
  return p;
}

inline std::string serialize_profile(const Profile& p) { return dump_canonical(profile_to_json(p)); }
inline Profile parse_profile(std::string_view text) { return profile_from_json(parse_json_text(text)); }

}  // namespace blockswap
