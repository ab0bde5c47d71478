#include "calibra/cli.hpp"

#include <filesystem>
#include <iostream>
#include <set>
#include <stdexcept>

#include "calibra/hardness.hpp"
#include "calibra/instance.hpp"
#include "calibra/learn.hpp"
#include "calibra/metrics.hpp"
#include "calibra/report.hpp"
#include "calibra/rules.hpp"
#include "calibra/serialize.hpp"

namespace calibra::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Ctx {
  json config;
  fs::path out;
  std::set<std::string> formats;  // json, csv, plotdata
  uint64_t seed = 1;

  bool wants(const std::string& f) const { return formats.count(f) > 0; }
  void emit(const std::string& base, const json& j) const {
    if (wants("json")) write_file((out / (base + ".json")).string(), canonical(j));
  }
  void emit_csv(const std::string& base, const std::string& csv) const {
    if (wants("csv")) write_file((out / (base + ".csv")).string(), csv);
  }
  void emit_plot(const std::string& base, const std::string& data) const {
    if (wants("plotdata")) write_file((out / (base + ".plot.csv")).string(), data);
  }
};

struct LoadedInstance {
  Population pop;
  Nature nature;
  GroupCollection groups;
  TypeSpace ts;
  std::optional<Predictor> pred;
};

json load_json_file(const std::string& path) { return json::parse(read_file(path)); }

LoadedInstance load_instance(const json& spec) {
  LoadedInstance li;
  if (spec.contains("preset")) {
    std::string preset = spec.at("preset").get<std::string>();
    if (preset != "pop4") throw std::invalid_argument("unknown instance preset: " + preset);
    Instance inst = pop4_instance();
    li.pop = inst.pop;
    li.nature = inst.nature;
    li.groups = inst.groups;
    li.ts = inst.ts;
    if (spec.contains("predictor")) {
      std::string p = spec.at("predictor").get<std::string>();
      if (p == "half")
        li.pred = half_predictor(4);
      else if (p == "swap")
        li.pred = swap_predictor();
      else if (p == "nature")
        li.pred = li.nature.assignment;
      else
        throw std::invalid_argument("unknown predictor preset: " + p);
    }
    return li;
  }
  const json& paths = spec.at("paths");
  li.pop = population_from_json(load_json_file(paths.at("population").get<std::string>()));
  li.nature = nature_from_json(load_json_file(paths.at("nature").get<std::string>()));
  li.groups = groups_from_json(load_json_file(paths.at("groups").get<std::string>()));
  li.groups.validate_against(li.pop);
  if (paths.contains("typespace"))
    li.ts = typespace_from_json(load_json_file(paths.at("typespace").get<std::string>()));
  else
    li.ts = TypeSpace(li.nature.k());
  if (paths.contains("predictor"))
    li.pred = predictor_from_json(load_json_file(paths.at("predictor").get<std::string>()));
  return li;
}

DecisionRule rule_from_config(const json& r) {
  std::string kind = r.at("kind").get<std::string>();
  if (kind == "ita") return ita_rule(r.at("g").get<std::vector<double>>());
  if (kind == "threshold") return threshold_rule(r.at("tau").get<int>(), r.at("k").get<int>());
  if (kind == "loss_min") {
    LossFunction loss = loss_from_json(r.at("loss"));
    loss.derive_certificate();
    return loss_min_rule(loss);
  }
  if (kind == "mac") {
    LossFunction loss = loss_from_json(r.at("loss"));
    loss.derive_certificate();
    return mac_rule(loss);
  }
  if (kind == "step") {
    // 1{y_t >= threshold} on coordinate t
    int t = r.value("type", 0);
    double thr = r.value("threshold", 0.95);
    int k = r.at("k").get<int>();
    return custom_rule(k, [t, thr](const StochasticVector& y) {
      return y[t] >= thr ? 1.0 : 0.0;
    });
  }
  throw std::invalid_argument("unknown rule kind: " + kind);
}

LossFunction loss_from_config(const json& cfg) {
  LossFunction loss =
      cfg.contains("schema") ? loss_from_json(cfg) : [&] {
        std::vector<std::array<double, 2>> table;
        for (const auto& row : cfg) table.push_back({row[0].get<double>(), row[1].get<double>()});
        return LossFunction(std::move(table));
      }();
  loss.derive_certificate();
  return loss;
}

LearnerConfig learner_from_config(const json& j, uint64_t seed) {
  LearnerConfig lc;
  lc.alpha = j.value("alpha", 0.01);
  lc.lambda = j.value("lambda", 0.25);
  lc.eta = j.value("eta", 0.0);
  lc.max_iter = j.value("max_iter", 0L);
  lc.seed = seed;
  std::string mode = j.value("mode", "ma_cw");
  if (mode == "ma_cw")
    lc.mode = LearnMode::MaCw;
  else if (mode == "ma_threshold")
    lc.mode = LearnMode::MaThreshold;
  else if (mode == "mc_cw")
    lc.mode = LearnMode::McCw;
  else if (mode == "mc_full")
    lc.mode = LearnMode::McFull;
  else
    throw std::invalid_argument("unknown learner mode: " + mode);
  return lc;
}

int cmd_generate(Ctx& ctx) {
  const json& g = ctx.config.at("instance");
  RandomInstanceSpec spec;
  spec.n = g.value("size", 64);
  spec.k = g.value("k", 2);
  spec.n_groups = g.value("groups", 4);
  spec.deterministic_nature = g.value("nature", std::string("random")) == "deterministic";
  spec.ordered = g.value("ordered", false);
  spec.uniform_weights = g.value("uniform_weights", true);
  spec.seed = ctx.seed;
  Instance inst = random_instance(spec);
  write_file((ctx.out / "population.json").string(), canonical(to_json(inst.pop)));
  write_file((ctx.out / "nature.json").string(), canonical(to_json(inst.nature)));
  write_file((ctx.out / "groups.json").string(), canonical(to_json(inst.groups)));
  write_file((ctx.out / "typespace.json").string(), canonical(to_json(inst.ts)));
  return 0;
}

int cmd_audit(Ctx& ctx) {
  LoadedInstance li = load_instance(ctx.config.at("instance"));
  std::string metric = ctx.config.at("metric").get<std::string>();
  AuditReport rep;
  if (metric == "ma_cw")
    rep = ma_error(li.pop, li.nature, li.pred.value(), li.groups, MaMode::CoordinateWise, li.ts);
  else if (metric == "ma_threshold")
    rep = ma_error(li.pop, li.nature, li.pred.value(), li.groups, MaMode::Threshold, li.ts);
  else if (metric == "mc_cw")
    rep = mc_cw_error(li.pop, li.nature, li.pred.value(), li.groups,
                      Discretization(ctx.config.value("lambda", 0.25)));
  else if (metric == "mc_full")
    rep = mc_full_error(li.pop, li.nature, li.pred.value(), li.groups,
                        Discretization(ctx.config.value("lambda", 0.25)));
  else if (metric == "mad") {
    DecisionRule rule = rule_from_config(ctx.config.at("rule"));
    rep = mad_error(li.pop, li.nature, li.pred.value(), rule.as_fn(), li.groups);
  } else if (metric == "mac") {
    LossFunction loss = loss_from_config(ctx.config.at("loss"));
    DecisionRule rule = rule_from_config(ctx.config.at("rule"));
    ActionFunction h = compose(rule, li.pred.value());
    rep = mac_error(li.pop, li.nature, h, loss, li.groups);
  } else {
    throw std::invalid_argument("unknown metric: " + metric);
  }
  ctx.emit("audit_report", report_json(rep));
  ctx.emit_csv("audit_report", report_csv(rep));
  return 0;
}

int cmd_learn(Ctx& ctx) {
  LoadedInstance li = load_instance(ctx.config.at("instance"));
  LearnerConfig lc = learner_from_config(ctx.config.value("learner", json::object()), ctx.seed);
  auto [pred, trace] =
      (lc.mode == LearnMode::MaCw || lc.mode == LearnMode::MaThreshold)
          ? learn_multiaccurate(li.pop, li.nature, li.groups, li.ts, lc)
          : learn_multicalibrated(li.pop, li.nature, li.groups, li.ts, lc);
  write_file((ctx.out / "predictor.json").string(), canonical(to_json(pred)));
  if (ctx.wants("csv"))
    write_file((ctx.out / "predictor.csv").string(), predictor_csv(pred));
  write_file((ctx.out / "trace.jsonl").string(), trace_jsonl(trace));
  ctx.emit_plot("trace", trace_plotdata(trace));
  json rep = {{"schema", "calibra/learn_report/v1"},
              {"converged", trace.converged},
              {"iterations", trace.iterations},
              {"final_gap", fmt12(trace.final_gap)},
              {"alpha", fmt12(lc.alpha)}};
  ctx.emit("learn_report", rep);
  return trace.converged ? 0 : 2;
}

int cmd_rules(Ctx& ctx) {
  DecisionRule rule = rule_from_config(ctx.config.at("rule"));
  int m = ctx.config.value("m", 10);
  AffinenessCertificate cert = affineness_distance(rule, m, ctx.seed);
  LipschitzEstimate lip = lipschitz_estimate(rule, m, ctx.seed);
  DecisionRule proj = affine_projection(rule);
  json rep = {{"schema", "calibra/rules_report/v1"},
              {"rule", rule_json(rule)},
              {"affine_projection", rule_json(proj)},
              {"affineness", certificate_json(cert)},
              {"lipschitz", lipschitz_json(lip)}};
  ctx.emit("rules_report", rep);
  return 0;
}

int cmd_omnipredict(Ctx& ctx) {
  LoadedInstance li = load_instance(ctx.config.at("instance"));
  LossFunction loss = loss_from_config(ctx.config.at("loss"));
  Discretization d(ctx.config.value("lambda", 0.25));
  auto [h, bound] = omnipredict(li.pop, li.nature, li.pred.value(), loss, li.groups, d);
  double gap =
      loss_gap(li.pop, li.nature, h, loss, indicator_class(li.groups, li.pop.size()));
  bool ok = gap <= bound;
  json rep = {{"schema", "calibra/omnipredict_report/v1"},
              {"bound", fmt12(bound)},
              {"loss_gap", fmt12(gap)},
              {"pass", ok}};
  ctx.emit("omnipredict_report", rep);
  return ok ? 0 : 2;
}

int cmd_hardness(Ctx& ctx) {
  std::string exp = ctx.config.at("experiment").get<std::string>();
  const json params = ctx.config.value("params", json::object());
  if (exp == "fraction_preservation") {
    FractionPreservationConfig cfg;
    cfg.n = params.value("n", cfg.n);
    cfg.gamma = params.value("gamma", cfg.gamma);
    cfg.probe_fraction = params.value("probe_fraction", cfg.probe_fraction);
    cfg.n_probes = params.value("n_probes", cfg.n_probes);
    cfg.n_keys = params.value("n_keys", cfg.n_keys);
    cfg.advantage_bound = params.value("advantage_bound", cfg.advantage_bound);
    cfg.seed = ctx.seed;
    FractionPreservationReport rep = run_fraction_preservation(cfg);
    ctx.emit("fraction_report", report_json(rep));
    ctx.emit_csv("fraction_report", report_csv(rep));
    return rep.pass ? 0 : 2;
  }
  if (exp == "decision_conflict") {
    DecisionConflictConfig cfg;
    cfg.n = params.value("n", cfg.n);
    cfg.lambda = params.value("lambda", cfg.lambda);
    cfg.alpha = params.value("alpha", cfg.alpha);
    cfg.M = params.value("M", cfg.M);
    cfg.kappa_eff = params.value("kappa_eff", cfg.kappa_eff);
    cfg.n_groups = params.value("n_groups", cfg.n_groups);
    cfg.n_keys = params.value("n_keys", cfg.n_keys);
    cfg.run_key_aware = params.value("run_key_aware", cfg.run_key_aware);
    cfg.seed = ctx.seed;
    double thr = params.value("accept_threshold", 0.95);
    DecisionRule rule = custom_rule(
        2, [thr](const StochasticVector& y) { return y[0] >= thr ? 1.0 : 0.0; });
    AffinenessCertificate cert;
    cert.y = unit_vector(0, 2);
    cert.y2 = unit_vector(1, 2);
    cert.gamma = 0.5;
    cert.grid_m = 2;
    cert.epsilon = cert.replay(rule);
    LipschitzEstimate lip;
    lip.finite = false;  // step rule: no finite certificate
    ConflictReport rep = run_decision_conflict_experiment(rule, cert, lip, cfg);
    ctx.emit("conflict_report", report_json(rep));
    ctx.emit_csv("conflict_report", report_csv(rep));
    return rep.pass ? 0 : 2;
  }
  if (exp == "loss_conflict") {
    LossConflictConfig cfg;
    cfg.n = params.value("n", cfg.n);
    cfg.eps_ac = params.value("eps_ac", cfg.eps_ac);
    cfg.alpha_learn = params.value("alpha_learn", cfg.alpha_learn);
    cfg.lambda = params.value("lambda", cfg.lambda);
    cfg.tolerance = params.value("tolerance", cfg.tolerance);
    cfg.n_groups = params.value("n_groups", cfg.n_groups);
    cfg.n_keys = params.value("n_keys", cfg.n_keys);
    cfg.seed = ctx.seed;
    LossFunction loss = ctx.config.contains("loss")
                            ? loss_from_config(ctx.config.at("loss"))
                            : [] {
                                LossFunction l({{0.0, 1.0}, {1.0, 0.0}});
                                l.derive_certificate();
                                return l;
                              }();
    ConflictReport rep = run_loss_conflict_experiment(loss, cfg);
    ctx.emit("conflict_report", report_json(rep));
    ctx.emit_csv("conflict_report", report_csv(rep));
    return rep.pass ? 0 : 2;
  }
  throw std::invalid_argument("unknown experiment: " + exp);
}

}  // namespace

int run(const nlohmann::json& config, const Overrides& ov) {
  try {
    if (config.value("schema", "") != "calibra/config/v1")
      throw std::invalid_argument("config: expected schema calibra/config/v1");
    Ctx ctx;
    ctx.config = config;
    ctx.out = ov.out_dir ? *ov.out_dir : config.value("out", std::string("."));
    std::string fmts = ov.formats ? *ov.formats : [&] {
      if (!config.contains("formats")) return std::string("json,csv");
      std::string s;
      for (const auto& f : config.at("formats")) s += (s.empty() ? "" : ",") + f.get<std::string>();
      return s;
    }();
    size_t pos = 0;
    while (pos != std::string::npos) {
      size_t next = fmts.find(',', pos);
      ctx.formats.insert(fmts.substr(pos, next == std::string::npos ? next : next - pos));
      pos = next == std::string::npos ? next : next + 1;
    }
    if (ov.seed)
      ctx.seed = *ov.seed;
    else if (config.contains("seeds")) {
      if (config.at("seeds").empty()) throw std::invalid_argument("config: seed list empty");
      ctx.seed = config.at("seeds")[0].get<uint64_t>();
    }
    std::filesystem::create_directories(ctx.out);

    std::string cmd = config.at("command").get<std::string>();
    if (cmd == "generate") return cmd_generate(ctx);
    if (cmd == "audit") return cmd_audit(ctx);
    if (cmd == "learn") return cmd_learn(ctx);
    if (cmd == "rules") return cmd_rules(ctx);
    if (cmd == "omnipredict") return cmd_omnipredict(ctx);
    if (cmd == "hardness") return cmd_hardness(ctx);
    throw std::invalid_argument("unknown command: " + cmd);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_file(const std::string& config_path, const Overrides& ov) {
  try {
    return run(nlohmann::json::parse(read_file(config_path)), ov);
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace calibra::cli
