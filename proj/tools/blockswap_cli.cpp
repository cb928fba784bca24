// blockswap command-line driver: gen, validate, enumerate, house, profile, search,
// rewrite and render. Data goes to --out or stdout; diagnostics go to stderr.

#include <blockswap/blockswap.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace bs = blockswap;

namespace {

class UsageError : public bs::Error {
 public:
  explicit UsageError(const std::string& what) : bs::Error(bs::ErrorCategory::usage, what) {}
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + out + "'");
  f << text;
}

bs::Rational rational_arg(const std::string& text, const char* flag) {
  try {
    return bs::Rational::parse(text);
  } catch (const std::invalid_argument&) {
    throw UsageError(std::string(flag) + " expects a rational written p/q, got '" + text + "'");
  }
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed, const char* command) {
  if (!seed) throw UsageError(std::string(command) + " is randomized and needs an explicit --seed");
  return *seed;
}

bs::ModelHouse load_house(const std::string& path) { return bs::parse_house(bs::read_file(path)); }
bs::Profile load_profile(const std::string& path) { return bs::parse_profile(bs::read_file(path)); }

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string spec_file, name = "synth", out;
  std::int64_t layers = 8;
  double edge_prob = 0.3;
  std::vector<std::int64_t> palette{8, 16, 32}, strides;
  std::optional<std::uint64_t> seed;
};

struct PoolArgs {
  std::string base, out_dir = ".";
  std::int64_t variants = 3;
  std::vector<std::int64_t> scales{2, 3, 1};
  double depth_prob = 0.5;
  std::optional<std::uint64_t> seed;
};

void run_gen(const GenArgs& a) {
  bs::GenSpec spec;
  if (!a.spec_file.empty()) {
    spec = bs::gen_spec_from_json(bs::parse_json_text(bs::read_file(a.spec_file)));
    if (a.seed) spec.seed = *a.seed;
  } else {
    spec.name = a.name;
    spec.layers = a.layers;
    spec.edge_prob = a.edge_prob;
    spec.channel_palette = a.palette;
    spec.stride_positions = a.strides;
    spec.seed = require_seed(a.seed, "gen");
  }
  emit(bs::serialize_network(bs::gen_network(spec)), a.out);
}

void run_gen_pool(const PoolArgs& a) {
  bs::PoolSpec spec;
  spec.variants = a.variants;
  spec.scale_factors = a.scales;
  spec.depth_prob = a.depth_prob;
  spec.seed = require_seed(a.seed, "gen pool");
  auto pool = bs::gen_pool(bs::load_network(a.base), spec);
  std::filesystem::create_directories(a.out_dir);
  for (const auto& net : pool) {
    auto path = (std::filesystem::path(a.out_dir) / (net.name() + ".json")).string();
    emit(bs::serialize_network(net), path);
    std::cout << path << "\n";
  }
}

int run_validate(const std::string& path) {
  auto report = bs::validate_network(bs::load_network(path));
  for (const auto& v : report) std::cerr << v.rule << ": " << v.subject << ": " << v.message << "\n";
  return report.empty() ? 0 : static_cast<int>(bs::ErrorCategory::validation);
}

void run_enumerate(const std::string& path, bool brute, std::int64_t min_size, std::size_t cap, const std::string& out) {
  auto net = bs::load_network(path);
  auto subs = brute ? bs::brute_force_enumerate(net, cap) : bs::enumerate_all(net);
  auto sets = bs::member_sets(subs);
  std::erase_if(sets, [&](const auto& s) { return static_cast<std::int64_t>(s.size()) < min_size; });
  emit(bs::dump_canonical(bs::member_sets_to_json(sets)), out);
}

struct HouseArgs {
  std::string teacher, scores, out;
  std::vector<std::string> pool;
  bs::HouseParams params;
  std::string r = "3/10";
  std::optional<std::uint64_t> seed;
};

std::map<std::string, bs::ChannelScores> load_scores(const std::string& path) {
  std::map<std::string, bs::ChannelScores> out;
  if (path.empty()) return out;
  auto j = bs::parse_json_text(bs::read_file(path));
  if (!j.is_object()) throw bs::SchemaViolation("$", "expected object of alternative id -> {in, out}");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bs::ChannelScores s;
    for (const auto* side : {"in", "out"}) {
      auto p = "$." + it.key() + "." + side;
      const auto& arr = bs::json_detail::as_array(bs::json_detail::field(it.value(), side, "$." + it.key()), p);
      auto& dest = std::string(side) == "in" ? s.in : s.out;
      for (const auto& v : arr) {
        if (!v.is_number()) throw bs::SchemaViolation(p, "expected numbers");
        dest.push_back(v.get<double>());
      }
    }
    out.emplace(it.key(), std::move(s));
  }
  return out;
}

void run_house_build(HouseArgs a) {
  a.params.seed = require_seed(a.seed, "house build");
  a.params.r = rational_arg(a.r, "--r");
  if (a.params.r.sign() <= 0 || a.params.r > bs::Rational(1)) throw UsageError("--r must lie in (0, 1]");
  auto teacher = bs::load_network(a.teacher);
  std::vector<bs::Network> pool;
  for (const auto& p : a.pool) pool.push_back(bs::load_network(p));
  auto house = bs::construct(teacher, pool, a.params);
  house = bs::expand(house, a.params.n_expand, load_scores(a.scores), bs::derive_seed(a.params.seed, 1));
  for (const auto& w : house.warnings) std::cerr << "warning: " << w << "\n";
  emit(bs::serialize_house(house), a.out);
}

struct ProfileArgs {
  std::string house, metric = "flops", dacc_max = "1/20", ratio = "1/2", requirement, lambda = "1", out;
  std::optional<std::uint64_t> seed;
};

void run_profile_synth(const ProfileArgs& a) {
  bs::SynthProfileParams p;
  p.metric_name = a.metric;
  p.dacc_max = rational_arg(a.dacc_max, "--dacc-max");
  p.requirement_ratio = rational_arg(a.ratio, "--requirement-ratio");
  if (!a.requirement.empty()) p.requirement = rational_arg(a.requirement, "--requirement");
  p.lambda = rational_arg(a.lambda, "--lambda");
  p.seed = require_seed(a.seed, "profile synth");
  try {
    bs::metric_of({}, p.metric_name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  emit(bs::serialize_profile(bs::synth_profile(load_house(a.house), p)), a.out);
}

void run_profile_load(const std::string& path, const std::string& house, const std::string& out) {
  auto profile = load_profile(path);
  if (!house.empty()) bs::check_profile_covers(profile, load_house(house));
  emit(bs::serialize_profile(profile), out);
}

struct SearchArgs {
  std::string house, profile, requirement, lambda, trace, out;
  std::int64_t iters = 5000, restarts = 1;
  std::string temperature = "1", cooling = "97/100";
  std::int64_t cooling_interval = 50;
  std::size_t retry = 0;
  bool teacher_only = false, random_plan = false, parallel = false;
  std::optional<std::uint64_t> seed;
};

void run_search(const SearchArgs& a) {
  const auto seed = require_seed(a.seed, "search");
  auto house = load_house(a.house);
  auto profile = load_profile(a.profile);
  if (!a.requirement.empty()) profile.requirement = rational_arg(a.requirement, "--requirement");
  if (!a.lambda.empty()) profile.lambda = rational_arg(a.lambda, "--lambda");
  if (profile.requirement.sign() <= 0) throw UsageError("--requirement must be positive");
  if (profile.lambda.sign() < 0) throw UsageError("--lambda must be non-negative");
  bs::SearchProblem problem(house, profile, bs::SearchOptions{a.teacher_only});

  if (a.random_plan) {
    bs::Rng rng(seed);
    emit(bs::dump_canonical(bs::plan_to_json(problem, bs::random_plan(problem, rng))), a.out);
    return;
  }
  bs::AnnealConfig cfg;
  cfg.iterations = a.iters;
  cfg.restarts = a.restarts;
  cfg.seed = seed;
  cfg.parallel = a.parallel;
  cfg.initial_temperature = rational_arg(a.temperature, "--temperature");
  cfg.cooling = rational_arg(a.cooling, "--cooling");
  cfg.cooling_interval = a.cooling_interval;
  cfg.record_trace = !a.trace.empty();
  cfg.neighbor.retry_draws = a.retry;
  bs::AnnealResult res;
  try {
    res = bs::anneal(problem, cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!a.trace.empty()) emit(bs::trace_to_jsonl(res.trace), a.trace);
  emit(bs::dump_canonical(bs::plan_to_json(problem, res.best)), a.out);
}

void run_rewrite(const std::string& house_path, const std::string& plan_path, const std::string& out,
                 const std::string& provenance_out) {
  auto house = load_house(house_path);
  auto doc = bs::plan_from_json(bs::parse_json_text(bs::read_file(plan_path)));
  auto res = bs::apply_plan(house, doc.plan);
  auto report = bs::validate_network(res.student);
  if (!report.empty()) throw bs::InvalidNetwork("student network fails validation: " + report.front().message);
  if (!provenance_out.empty()) emit(bs::dump_canonical(bs::provenance_to_json(res.provenance)), provenance_out);
  emit(bs::serialize_network(res.student), out);
}

void run_render(const std::string& net_path, const std::string& provenance, const std::string& out) {
  auto net = bs::load_network(net_path);
  if (provenance.empty()) {
    emit(bs::render_dot(net), out);
    return;
  }
  auto prov = bs::provenance_from_json(bs::parse_json_text(bs::read_file(provenance)));
  emit(bs::render_dot(net, &prov), out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-replacement search over layer graphs"};
  app.require_subcommand(1);
  int status = 0;

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random layer DAG (or, with 'pool', width variants)");
  gen_cmd->add_option("--spec", gen.spec_file, "Generator spec as JSON");
  gen_cmd->add_option("--name", gen.name);
  gen_cmd->add_option("--layers", gen.layers)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--edge-prob", gen.edge_prob)->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--palette", gen.palette, "Channel widths")->delimiter(',');
  gen_cmd->add_option("--strides", gen.strides, "Topological positions with stride 2")->delimiter(',');
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--out", gen.out);
  PoolArgs pool;
  auto* pool_cmd = gen_cmd->add_subcommand("pool", "Width-scaled variants of a base network");
  pool_cmd->add_option("--base", pool.base)->required();
  pool_cmd->add_option("--variants", pool.variants)->check(CLI::NonNegativeNumber);
  pool_cmd->add_option("--scales", pool.scales, "Integer channel multipliers")->delimiter(',');
  pool_cmd->add_option("--depth-prob", pool.depth_prob)->check(CLI::Range(0.0, 1.0));
  pool_cmd->add_option("--seed", pool.seed);
  pool_cmd->add_option("--out-dir", pool.out_dir);
  gen_cmd->callback([&] {
    if (pool_cmd->parsed()) run_gen_pool(pool);
    else run_gen(gen);
  });

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a network; violations go to stderr");
  validate_cmd->add_option("network", validate_path)->required();
  validate_cmd->callback([&] { status = run_validate(validate_path); });

  std::string enum_path, enum_out;
  bool brute = false;
  std::int64_t min_size = 1;
  std::size_t cap = bs::kDefaultBruteForceCap;
  auto* enum_cmd = app.add_subcommand("enumerate", "List every single-input single-output sub-network");
  enum_cmd->add_option("network", enum_path)->required();
  enum_cmd->add_flag("--brute-force", brute, "Use the exhaustive subset oracle");
  enum_cmd->add_option("--cap", cap, "Layer limit for --brute-force");
  enum_cmd->add_option("--min-size", min_size)->check(CLI::PositiveNumber);
  enum_cmd->add_option("--out", enum_out);
  enum_cmd->callback([&] { run_enumerate(enum_path, brute, min_size, cap, enum_out); });

  HouseArgs house;
  auto* house_cmd = app.add_subcommand("house", "Model house operations");
  house_cmd->require_subcommand(1);
  auto* build_cmd = house_cmd->add_subcommand("build", "Sample teacher sub-networks and gather alternatives");
  build_cmd->add_option("--teacher", house.teacher)->required();
  build_cmd->add_option("--pool", house.pool)->expected(0, -1);
  build_cmd->add_option("--n-t", house.params.n_t)->check(CLI::NonNegativeNumber);
  build_cmd->add_option("--n-p", house.params.n_p)->check(CLI::NonNegativeNumber);
  build_cmd->add_option("--n-expand", house.params.n_expand)->check(CLI::NonNegativeNumber);
  build_cmd->add_option("--r", house.r, "Pop-order prefix ratio, p/q");
  build_cmd->add_option("--min-size", house.params.min_size)->check(CLI::PositiveNumber);
  build_cmd->add_option("--scores", house.scores, "Per-channel scores for expansion masks");
  build_cmd->add_option("--seed", house.seed);
  build_cmd->add_option("--out", house.out);
  build_cmd->callback([&] { run_house_build(house); });

  ProfileArgs prof;
  std::string load_path, load_house_path, load_out;
  auto* profile_cmd = app.add_subcommand("profile", "Cost and accuracy-loss profiles");
  profile_cmd->require_subcommand(1);
  auto* synth_cmd = profile_cmd->add_subcommand("synth", "Synthesize an additive profile for a house");
  synth_cmd->add_option("--house", prof.house)->required();
  synth_cmd->add_option("--metric", prof.metric, "flops, params or latency_us:<device>");
  synth_cmd->add_option("--dacc-max", prof.dacc_max);
  synth_cmd->add_option("--requirement-ratio", prof.ratio);
  synth_cmd->add_option("--requirement", prof.requirement);
  synth_cmd->add_option("--lambda", prof.lambda);
  synth_cmd->add_option("--seed", prof.seed);
  synth_cmd->add_option("--out", prof.out);
  synth_cmd->callback([&] { run_profile_synth(prof); });
  auto* load_cmd = profile_cmd->add_subcommand("load", "Check and canonicalize a profile");
  load_cmd->add_option("profile", load_path)->required();
  load_cmd->add_option("--house", load_house_path, "Also check coverage of this house");
  load_cmd->add_option("--out", load_out);
  load_cmd->callback([&] { run_profile_load(load_path, load_house_path, load_out); });

  SearchArgs search;
  auto* search_cmd = app.add_subcommand("search", "Anneal over feasible replacement plans");
  search_cmd->add_option("--house", search.house)->required();
  search_cmd->add_option("--profile", search.profile)->required();
  search_cmd->add_option("--requirement", search.requirement, "Override R, p/q");
  search_cmd->add_option("--lambda", search.lambda, "Override lambda, p/q");
  search_cmd->add_option("--iters", search.iters)->check(CLI::NonNegativeNumber);
  search_cmd->add_option("--restarts", search.restarts)->check(CLI::PositiveNumber);
  search_cmd->add_option("--temperature", search.temperature);
  search_cmd->add_option("--cooling", search.cooling);
  search_cmd->add_option("--cooling-interval", search.cooling_interval)->check(CLI::PositiveNumber);
  search_cmd->add_option("--retry-draws", search.retry, "Infeasible neighbor draws tolerated");
  search_cmd->add_flag("--teacher-only", search.teacher_only, "Only teacher-origin alternatives");
  search_cmd->add_flag("--random-plan", search.random_plan, "Emit a random feasible plan instead of searching");
  search_cmd->add_flag("--parallel", search.parallel, "Run restart chains on threads");
  search_cmd->add_option("--trace", search.trace, "Write the per-iteration trace as JSON lines");
  search_cmd->add_option("--seed", search.seed);
  search_cmd->add_option("--out", search.out);
  search_cmd->callback([&] { run_search(search); });

  std::string rw_house, rw_plan, rw_out, rw_prov;
  auto* rewrite_cmd = app.add_subcommand("rewrite", "Splice a plan into the teacher");
  rewrite_cmd->add_option("--house", rw_house)->required();
  rewrite_cmd->add_option("--plan", rw_plan)->required();
  rewrite_cmd->add_option("--out", rw_out);
  rewrite_cmd->add_option("--provenance-out", rw_prov);
  rewrite_cmd->callback([&] { run_rewrite(rw_house, rw_plan, rw_out, rw_prov); });

  std::string render_path, render_prov, render_out;
  auto* render_cmd = app.add_subcommand("render", "Graphviz DOT for a network");
  render_cmd->add_option("network", render_path)->required();
  render_cmd->add_option("--provenance", render_prov);
  render_cmd->add_option("--out", render_out);
  render_cmd->callback([&] { run_render(render_path, render_prov, render_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return static_cast<int>(bs::ErrorCategory::usage);
  } catch (const bs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.category());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(bs::ErrorCategory::usage);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return static_cast<int>(bs::ErrorCategory::internal);
  }
  return status;
}
