// Acceptance battery: eleven desk-scale checks with pinned tolerances, one
// pass/fail line each. Run with a criterion number (1-11) to execute a single
// check, or with no arguments to run them all. Exit 0 iff every executed
// criterion passes. Criterion 2's non-vacuity sub-check is expected to fail;
// see README and the informational lines it prints.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "calibra/hardness.hpp"
#include "calibra/instance.hpp"
#include "calibra/learn.hpp"
#include "calibra/metrics.hpp"
#include "calibra/reference.hpp"
#include "calibra/report.hpp"
#include "calibra/rules.hpp"
#include "calibra/serialize.hpp"

namespace {

using namespace calibra;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr double kTol = 1e-12;
bool g_quiet_info = false;  // criterion 11 re-runs fixtures without info lines

struct Outcome {
  bool pass = true;
  std::string detail;
  json report = json::object();  // canonical bytes compared by criterion 11

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Predictor random_predictor(int n, int k, RandomStream rng) {
  std::vector<StochasticVector> rows;
  rows.reserve(n);
  for (int x = 0; x < n; ++x) rows.push_back(random_simplex_point(k, rng));
  return Predictor(std::move(rows));
}

std::vector<double> random_ita_weights(int k, RandomStream& rng) {
  std::vector<double> g(k);
  for (double& v : g) v = rng.next_double();
  return g;
}

// ---------------------------------------------------------------------------
// 1. Exactness oracle: enumeration auditors vs the serial brute-force
//    re-implementation on 100 random instances, to 1e-12, under 10 s.
Outcome crit1() {
  Outcome out;
  auto t0 = Clock::now();
  double worst = 0;
  auto match = [&](double a, double b) { worst = std::max(worst, std::abs(a - b)); };
  for (int i = 0; i < 100; ++i) {
    RandomInstanceSpec spec;
    spec.n = 16 + (i * 37) % 241;  // 16..256
    spec.k = 2 + i % 3;
    spec.n_groups = 1 + i % 7;  // |C| <= 8 with the full domain
    spec.ordered = i % 2 == 0;
    spec.deterministic_nature = i % 5 == 0;
    spec.uniform_weights = i % 3 != 0;
    spec.seed = 1000 + i;
    Instance inst = random_instance(spec);
    RandomStream rng(2000 + i);
    Predictor pred = random_predictor(spec.n, spec.k, rng.substream(0));

    match(ma_error(inst.pop, inst.nature, pred, inst.groups, MaMode::CoordinateWise, inst.ts)
              .max_gap,
          reference::ma_cw_error(inst.pop, inst.nature, pred, inst.groups));
    if (spec.ordered)
      match(ma_error(inst.pop, inst.nature, pred, inst.groups, MaMode::Threshold, inst.ts).max_gap,
            reference::ma_threshold_error(inst.pop, inst.nature, pred, inst.groups));
    match(mc_cw_error(inst.pop, inst.nature, pred, inst.groups, Discretization(0.25)).max_gap,
          reference::mc_cw_error(inst.pop, inst.nature, pred, inst.groups, 0.25));
    match(mc_full_error(inst.pop, inst.nature, pred, inst.groups, Discretization(0.25)).max_gap,
          reference::mc_full_error(inst.pop, inst.nature, pred, inst.groups, 0.25));

    RandomStream rrng = rng.substream(1);
    DecisionRule rule = ita_rule(random_ita_weights(spec.k, rrng));
    match(mad_error(inst.pop, inst.nature, pred, rule.as_fn(), inst.groups).max_gap,
          reference::mad_error(inst.pop, inst.nature, pred, rule.as_fn(), inst.groups));

    RandomStream lrng = rng.substream(2);
    LossFunction loss = random_nontrivial_loss(spec.k, lrng);
    std::vector<double> acc(spec.n);
    for (double& a : acc) a = lrng.next_double();
    ActionFunction h(std::move(acc));
    match(exp_loss(inst.pop, inst.nature, h, loss),
          reference::exp_loss(inst.pop, inst.nature, h, loss));
    match(mac_error(inst.pop, inst.nature, h, loss, inst.groups).max_gap,
          reference::mac_error(inst.pop, inst.nature, h, loss, inst.groups));
  }
  double secs = seconds_since(t0);
  out.require(worst <= kTol, "enumeration vs brute force deviation " + fmt12(worst));
  out.require(secs < 10.0, "runtime " + fmt12(secs) + " s >= 10 s");
  out.detail = "max deviation " + fmt12(worst) + ", " + fmt12(secs) + " s";
  out.report = {{"criterion", 1}, {"max_deviation", fmt12(worst)}};
  return out;
}

// ---------------------------------------------------------------------------
// 2. Learned coordinate-wise predictors vs random ITA rules: per-group
//    decision gap <= k*alpha/delta, plus the non-vacuity sub-check as stated
//    (>= 0.9 of the bound attained somewhere). The signed per-type gaps of any
//    group sum to zero, so the true supremum is half the bound; the battery
//    includes a designed fixture that attains it and an informational
//    tightness line at the 0.45 threshold.
Outcome crit2() {
  Outcome out;
  auto t0 = Clock::now();
  const double alpha = 0.02;
  double worst_ratio = 0;
  bool bound_ok = true;
  bool learners_ok = true;

  auto eval = [&](const Instance& inst, const Predictor& pred, const DecisionRule& rule) {
    AuditReport rep = mad_error(inst.pop, inst.nature, pred, rule.as_fn(), inst.groups);
    for (const auto& c : rep.constraints) {
      double bound = inst.ts.k * alpha / c.group_mass;
      if (std::abs(c.gap) > bound + kTol) bound_ok = false;
      worst_ratio = std::max(worst_ratio, std::abs(c.gap) / bound);
    }
  };

  for (int i = 0; i < 50; ++i) {
    RandomInstanceSpec spec;
    spec.n = 32;
    spec.k = 2 + i % 3;
    spec.n_groups = 3;
    spec.seed = 3000 + i;
    Instance inst = random_instance(spec);
    LearnerConfig cfg;
    cfg.alpha = alpha;
    auto [pred, trace] = learn_multiaccurate(inst.pop, inst.nature, inst.groups, inst.ts, cfg);
    learners_ok = learners_ok && trace.converged;
    RandomStream rng(4000 + i);
    for (int r = 0; r < 20; ++r) eval(inst, pred, ita_rule(random_ita_weights(spec.k, rng)));
  }

  // designed near-tight fixture: block nature, learner stops right at alpha,
  // extreme ITA rule reads the binding coordinate
  Instance tight = pop4_instance();
  LearnerConfig tcfg;
  tcfg.alpha = alpha;
  auto [tpred, ttrace] = learn_multiaccurate(tight.pop, tight.nature, tight.groups, tight.ts, tcfg);
  learners_ok = learners_ok && ttrace.converged;
  eval(tight, tpred, ita_rule({1.0, 0.0}));
  eval(tight, tpred, ita_rule({0.0, 1.0}));

  double secs = seconds_since(t0);
  out.require(learners_ok, "a learner failed to converge");
  out.require(bound_ok, "a decision gap exceeded k*alpha/delta");
  out.require(worst_ratio >= 0.9,
              "non-vacuity as stated: no gap within 10% of the bound (attained ratio " +
                  fmt12(worst_ratio) + ", supremum is 0.5 by the zero-sum argument)");
  out.require(secs < 60.0, "runtime " + fmt12(secs) + " s >= 60 s");
  if (!g_quiet_info) {
    std::printf("  [info] criterion 2 attained ratio %s of k*alpha/delta (supremum 0.5)\n",
                fmt12(worst_ratio).c_str());
    std::printf("  [info] criterion 2 attainable tightness (ratio >= 0.45): %s\n",
                worst_ratio >= 0.45 ? "PASS" : "FAIL");
  }
  out.detail += (out.detail.empty() ? "" : "; ") + ("attained ratio " + fmt12(worst_ratio)) +
                ", " + fmt12(secs) + " s";
  out.report = {{"criterion", 2},
                {"attained_ratio", fmt12(worst_ratio)},
                {"bound_ok", bound_ok}};
  return out;
}

// ---------------------------------------------------------------------------
// 3. Ordered types, threshold-mode predictors, deterministic monotone rules:
//    per-group decision gap <= alpha/delta.
Outcome crit3() {
  Outcome out;
  const double alpha = 0.02;
  double worst_ratio = 0;
  for (int i = 0; i < 50; ++i) {
    RandomInstanceSpec spec;
    spec.n = 32;
    spec.k = 2 + i % 3;
    spec.n_groups = 3;
    spec.ordered = true;
    spec.seed = 5000 + i;
    Instance inst = random_instance(spec);
    LearnerConfig cfg;
    cfg.alpha = alpha;
    cfg.mode = LearnMode::MaThreshold;
    auto [pred, trace] = learn_multiaccurate(inst.pop, inst.nature, inst.groups, inst.ts, cfg);
    out.require(trace.converged, "learner did not converge on instance " + std::to_string(i));
    for (int tau = 1; tau < spec.k; ++tau) {
      DecisionRule rule = threshold_rule(tau, spec.k);
      AuditReport rep = mad_error(inst.pop, inst.nature, pred, rule.as_fn(), inst.groups);
      for (const auto& c : rep.constraints) {
        double bound = alpha / c.group_mass;
        if (std::abs(c.gap) > bound + kTol)
          out.require(false, "gap " + fmt12(c.gap) + " > alpha/delta on " + c.group_id);
        worst_ratio = std::max(worst_ratio, std::abs(c.gap) / bound);
      }
    }
  }
  out.detail = "worst gap at " + fmt12(worst_ratio) + " of alpha/delta";
  out.report = {{"criterion", 3}, {"worst_ratio", fmt12(worst_ratio)}};
  return out;
}

// ---------------------------------------------------------------------------
// 4. Deterministic-nature battery: composing the averaged loss-min rule with
//    a learned MA predictor stays classification-accurate to k*alpha/delta.
Outcome crit4() {
  Outcome out;
  const double alpha = 0.02;
  double worst_ratio = 0;
  for (int i = 0; i < 50; ++i) {
    RandomInstanceSpec spec;
    spec.n = 32;
    spec.k = 2 + i % 3;
    spec.n_groups = 3;
    spec.deterministic_nature = true;
    spec.seed = 6000 + i;
    Instance inst = random_instance(spec);
    LearnerConfig cfg;
    cfg.alpha = alpha;
    auto [pred, trace] = learn_multiaccurate(inst.pop, inst.nature, inst.groups, inst.ts, cfg);
    out.require(trace.converged, "learner did not converge on instance " + std::to_string(i));
    RandomStream rng(6100 + i);
    LossFunction loss = random_nontrivial_loss(spec.k, rng);
    ActionFunction h = compose(mac_rule(loss), pred);
    AuditReport rep = mac_error(inst.pop, inst.nature, h, loss, inst.groups);
    for (const auto& c : rep.constraints) {
      double bound = spec.k * alpha / c.group_mass;
      if (std::abs(c.gap) > bound + kTol)
        out.require(false, "mac gap " + fmt12(c.gap) + " > k*alpha/delta on " + c.group_id);
      worst_ratio = std::max(worst_ratio, std::abs(c.gap) / bound);
    }
  }
  out.detail = "worst gap at " + fmt12(worst_ratio) + " of k*alpha/delta";
  out.report = {{"criterion", 4}, {"worst_ratio", fmt12(worst_ratio)}};
  return out;
}

// ---------------------------------------------------------------------------
// 5. Conversion tightness witnesses at k=4, alpha=0.05, exact to 1e-12.
Outcome crit5() {
  Outcome out;
  const double a = 0.05;
  Population pop = Population::uniform(1);
  Nature nat{Predictor({StochasticVector({0.25, 0.25, 0.25, 0.25})})};
  GroupCollection C({Group("all", {0})});
  TypeSpace ts(4, true);

  // threshold error exactly alpha, coordinate-wise exactly 2*alpha
  Predictor wa({StochasticVector({0.25, 0.25 + a, 0.25 - 2 * a, 0.25 + a})});
  double th_a = ma_error(pop, nat, wa, C, MaMode::Threshold, ts).max_gap;
  double cw_a = ma_error(pop, nat, wa, C, MaMode::CoordinateWise, ts).max_gap;
  out.require(std::abs(th_a - a) <= kTol, "threshold witness: " + fmt12(th_a) + " != alpha");
  out.require(std::abs(cw_a - 2 * a) <= kTol, "cw gap " + fmt12(cw_a) + " != 2*alpha");

  // coordinate-wise error exactly alpha, threshold exactly (k/2)*alpha
  Predictor wb({StochasticVector({0.25 + a, 0.25 + a, 0.25 - a, 0.25 - a})});
  double cw_b = ma_error(pop, nat, wb, C, MaMode::CoordinateWise, ts).max_gap;
  double th_b = ma_error(pop, nat, wb, C, MaMode::Threshold, ts).max_gap;
  out.require(std::abs(cw_b - a) <= kTol, "cw witness: " + fmt12(cw_b) + " != alpha");
  out.require(std::abs(th_b - 2 * a) <= kTol, "threshold gap " + fmt12(th_b) + " != (k/2)*alpha");

  out.detail = "cw from threshold-alpha: " + fmt12(cw_a) + "; threshold from cw-alpha: " +
               fmt12(th_b);
  out.report = {{"criterion", 5},
                {"cw_from_threshold", fmt12(cw_a)},
                {"threshold_from_cw", fmt12(th_b)}};
  return out;
}

// ---------------------------------------------------------------------------
// 6. Loss-min rules are far from affine: the forced unit-vector witness
//    replays exactly 0.5 and the grid certificate is at least 0.5.
Outcome crit6() {
  Outcome out;
  double min_eps = 1.0;
  for (int i = 0; i < 20; ++i) {
    int k = 2 + i % 3;
    RandomStream rng(6600 + i);
    LossFunction loss = random_nontrivial_loss(k, rng);
    DecisionRule rule = loss_min_rule(loss);
    AffinenessCertificate forced;
    forced.y = unit_vector(loss.cert->t_reject, k);
    forced.y2 = unit_vector(loss.cert->t_accept, k);
    forced.gamma = 0.5;
    double replay = forced.replay(rule);
    out.require(std::abs(replay - 0.5) <= kTol,
                "forced witness replay " + fmt12(replay) + " != 0.5 (loss " + std::to_string(i) +
                    ")");
    AffinenessCertificate cert = affineness_distance(rule, 4, 6700 + i);
    out.require(cert.epsilon >= 0.5 - kTol,
                "certificate " + fmt12(cert.epsilon) + " < 0.5 (loss " + std::to_string(i) + ")");
    min_eps = std::min(min_eps, cert.epsilon);
  }
  out.detail = "min certified distance " + fmt12(min_eps);
  out.report = {{"criterion", 6}, {"min_epsilon", fmt12(min_eps)}};
  return out;
}

// ---------------------------------------------------------------------------
// 7. Omniprediction: the full-MC post-processing bound and the three
//    relaxation pipelines on 30 instances.
Outcome crit7() {
  Outcome out;
  auto t0 = Clock::now();
  double worst_margin = -1;  // max gap/bound ratio across all sub-checks
  for (int i = 0; i < 30; ++i) {
    RandomInstanceSpec spec;
    spec.n = 32;
    spec.k = 2 + i % 3;
    spec.n_groups = 3;
    spec.seed = 7000 + i;
    Instance inst = random_instance(spec);
    const int n = spec.n, k = spec.k;
    double lambda = i % 2 == 0 ? 0.25 : 0.125;
    Discretization d(lambda);
    RandomStream rng(7100 + i);
    std::vector<ActionFunction> H = indicator_class(inst.groups, n);
    auto tag = [&](const char* p) { return std::string(p) + " (instance " + std::to_string(i) + ")"; };

    // (a) full-MC predictor, averaged loss-min post-processing, 3k(alpha+lambda)
    LearnerConfig mc;
    mc.alpha = 0.02;
    mc.lambda = lambda;
    mc.mode = LearnMode::McFull;
    auto [predf, trf] = learn_multicalibrated(inst.pop, inst.nature, inst.groups, inst.ts, mc);
    out.require(trf.converged, tag("full-MC learner diverged"));
    RandomStream lrng = rng.substream(0);
    LossFunction loss = random_nontrivial_loss(k, lrng);
    auto [h, bound] = omnipredict(inst.pop, inst.nature, predf, loss, inst.groups, d);
    double gap = loss_gap(inst.pop, inst.nature, h, loss, H);
    out.require(gap <= bound + kTol, tag("post-processing gap above 3k(alpha+lambda)"));
    worst_margin = std::max(worst_margin, gap / bound);

    // (b) numeric types + linear loss via the calibrated expectation
    std::vector<double> values(k);
    for (int t = 0; t < k; ++t) values[t] = (t + 0.5) / k;
    TypeSpace tsnum(k, true, values);
    std::vector<double> qstar = expectation_target(inst.nature, tsnum);
    LearnerConfig sc;
    sc.alpha = 0.02;
    sc.lambda = lambda;
    auto [qt, trq] = learn_scalar_calibrated(inst.pop, qstar, inst.groups, sc);
    out.require(trq.converged, tag("scalar learner diverged"));
    RandomStream crng = rng.substream(1);
    double c0 = 0.25 + 0.5 * crng.next_double(), d0 = 0.5 * crng.next_double() - 0.25;
    double c1 = 0.25 + 0.5 * crng.next_double(), d1 = 0.5 * crng.next_double() - 0.25;
    std::vector<std::array<double, 2>> table(k);
    for (int t = 0; t < k; ++t) table[t] = {c0 + d0 * values[t], c1 + d1 * values[t]};
    LossFunction lin(table);
    std::vector<double> hb(n);
    for (int x = 0; x < n; ++x) hb[x] = (c1 - c0) + (d1 - d0) * qt[x] < 0 ? 1.0 : 0.0;
    double alpha_b = 0;
    for (const auto& S : inst.groups.groups) {
      std::vector<double> bins(d.bins, 0.0);
      for (uint32_t x : S.members) bins[d.bin_of(qt[x])] += inst.pop.weight(x) * (qstar[x] - qt[x]);
      for (double v : bins) alpha_b = std::max(alpha_b, std::abs(v));
    }
    double gap_b = loss_gap(inst.pop, inst.nature, ActionFunction(hb), lin, H);
    double bound_b = 6 * (alpha_b + lambda);
    out.require(gap_b <= bound_b + kTol, tag("linear-loss pipeline gap above 6(alpha+lambda)"));
    worst_margin = std::max(worst_margin, gap_b / bound_b);

    // (c) loss-weighted scalar pipeline: gap <= 2*alpha with alpha measured on
    //     the half-set unions the guarantee actually uses
    RandomStream l2rng = rng.substream(2);
    LossFunction loss2 = random_nontrivial_loss(k, l2rng);
    std::vector<double> pstar = loss_weighted_target(inst.nature, loss2);
    auto [pt, trp] = learn_scalar_calibrated(inst.pop, pstar, inst.groups, sc);
    out.require(trp.converged, tag("loss-weighted learner diverged"));
    std::vector<double> hc(n);
    for (int x = 0; x < n; ++x) hc[x] = pt[x] > 0.5 ? 1.0 : 0.0;
    double alpha_c = 0;
    for (const auto& S : inst.groups.groups) {
      std::vector<uint8_t> in(n, 0);
      for (uint32_t x : S.members) in[x] = 1;
      for (int side = 0; side < 2; ++side) {      // S and its complement
        for (int half = 0; half < 2; ++half) {    // p~ > 1/2 and p~ <= 1/2
          double cov = 0;
          for (int x = 0; x < n; ++x)
            if ((in[x] == 1) == (side == 0) && (pt[x] > 0.5) == (half == 0))
              cov += inst.pop.weight(x) * (pstar[x] - pt[x]);
          alpha_c = std::max(alpha_c, std::abs(2 * cov));
        }
      }
    }
    double gap_c = loss_gap(inst.pop, inst.nature, ActionFunction(hc), loss2, H);
    out.require(gap_c <= 2 * alpha_c + kTol, tag("loss-weighted pipeline gap above 2*alpha"));
    if (alpha_c > 0) worst_margin = std::max(worst_margin, gap_c / (2 * alpha_c));

    // (d) loss-family learner: every per-loss gap <= epsilon
    const double eps = 0.05;
    RandomStream frng = rng.substream(3);
    std::vector<LossFunction> L;
    for (int j = 0; j < 1 + i % 4; ++j) L.push_back(random_nontrivial_loss(k, frng));
    LearnerConfig oi;
    auto [po, tro] = learn_oi_loss_family(inst.pop, inst.nature, H, L, eps, oi);
    out.require(tro.converged, tag("loss-family learner diverged"));
    for (const auto& l : L) {
      ActionFunction hl = compose(loss_min_rule(l), po);
      double g = loss_gap(inst.pop, inst.nature, hl, l, H);
      out.require(g <= eps + kTol, tag("per-loss gap above epsilon"));
      worst_margin = std::max(worst_margin, g / eps);
    }
  }
  double secs = seconds_since(t0);
  out.require(secs < 300.0, "runtime " + fmt12(secs) + " s >= 300 s");
  out.detail = "worst gap at " + fmt12(worst_margin) + " of its bound, " + fmt12(secs) + " s";
  out.report = {{"criterion", 7}, {"worst_margin", fmt12(worst_margin)}};
  return out;
}

// shared fixtures for the two conflict experiments
DecisionRule conflict_rule() {
  return custom_rule(2, [](const StochasticVector& y) { return y[0] >= 0.95 ? 1.0 : 0.0; });
}

ConflictReport run_decision_conflict(const DecisionConflictConfig& cfg) {
  DecisionRule rule = conflict_rule();
  AffinenessCertificate cert;
  cert.y = unit_vector(0, 2);
  cert.y2 = unit_vector(1, 2);
  cert.gamma = 0.5;
  cert.grid_m = 2;
  cert.epsilon = cert.replay(rule);
  LipschitzEstimate lip;
  lip.finite = false;
  return run_decision_conflict_experiment(rule, cert, lip, cfg);
}

// ---------------------------------------------------------------------------
// 8. Decision-conflict experiment at the default scale: calibrated yet
//    decision-inaccurate for the key-oblivious learner, accurate for the
//    key-aware control.
Outcome crit8() {
  Outcome out;
  auto t0 = Clock::now();
  DecisionConflictConfig cfg;  // |X|=2^16, 20 keys, lambda=1/8, alpha=0.01
  ConflictReport rep = run_decision_conflict(cfg);
  out.require(static_cast<int>(rep.dtrials.size()) == cfg.n_keys, "trial count");
  double min_mad = 1, max_mc = 0, max_excess = 0;
  for (const auto& t : rep.dtrials) {
    out.require(t.learner_converged, "key-oblivious learner diverged");
    out.require(t.mc_cw <= 0.01 + kTol, "mc_cw " + fmt12(t.mc_cw) + " > 0.01");
    out.require(t.mad >= 0.25 - 0.05, "mad " + fmt12(t.mad) + " < 0.2");
    out.require(t.key_aware_ok, "key-aware excess " + fmt12(t.key_aware_excess) + " > 0.02");
    min_mad = std::min(min_mad, t.mad);
    max_mc = std::max(max_mc, t.mc_cw);
    max_excess = std::max(max_excess, t.key_aware_excess);
  }
  double secs = seconds_since(t0);
  out.require(secs < 300.0, "runtime " + fmt12(secs) + " s >= 300 s");
  out.detail = "min mad " + fmt12(min_mad) + ", max mc_cw " + fmt12(max_mc) +
               ", max key-aware excess " + fmt12(max_excess) + ", " + fmt12(secs) + " s";
  out.report = report_json(rep);
  return out;
}

// ---------------------------------------------------------------------------
// 9. Loss-conflict experiment at the default scale: every key-oblivious
//    MAC-accurate battery member pays the loss penalty; the key-aware optimal
//    actions do not.
Outcome crit9() {
  Outcome out;
  auto t0 = Clock::now();
  LossConflictConfig cfg;  // L01, |X|=2^16, eps_ac=0.0125, 20 keys
  LossFunction l01({{0.0, 1.0}, {1.0, 0.0}});
  l01.derive_certificate();
  ConflictReport rep = run_loss_conflict_experiment(l01, cfg);
  out.require(!rep.vacuous, "bound is vacuous");
  out.require(static_cast<int>(rep.ltrials.size()) == cfg.n_keys, "trial count");
  const double required = 0.125 - 0.025 - 0.01;
  double min_gap = 1, max_ka_mac = 0;
  for (const auto& t : rep.ltrials) {
    out.require(t.learner_converged, "key-oblivious learner diverged");
    out.require(t.mac_accurate_count >= 1, "no MAC-accurate battery member");
    out.require(t.min_pass_gap >= required,
                "loss gap " + fmt12(t.min_pass_gap) + " < " + fmt12(required));
    out.require(t.key_aware_mac <= 0.01 + kTol, "key-aware mac " + fmt12(t.key_aware_mac));
    out.require(t.key_aware_loss_gap < 0, "key-aware loss gap not negative");
    min_gap = std::min(min_gap, t.min_pass_gap);
    max_ka_mac = std::max(max_ka_mac, t.key_aware_mac);
  }
  out.require(rep.pass, "experiment verdict FAIL");
  double secs = seconds_since(t0);
  out.require(secs < 300.0, "runtime " + fmt12(secs) + " s >= 300 s");
  out.detail = "min MAC-accurate loss gap " + fmt12(min_gap) + " (required " + fmt12(required) +
               "), max key-aware mac " + fmt12(max_ka_mac) + ", " + fmt12(secs) + " s";
  out.report = report_json(rep);
  return out;
}

// ---------------------------------------------------------------------------
// 10. Fraction preservation: 64 key-oblivious probes cannot tell the subset
//     from its complement beyond 0.03 in any of 20 keyed trials.
Outcome crit10() {
  Outcome out;
  FractionPreservationConfig cfg;  // |X|=2^16, 64 probes, 20 keys, bound 0.03
  FractionPreservationReport rep = run_fraction_preservation(cfg);
  out.require(static_cast<int>(rep.max_advantage.size()) == cfg.n_keys, "trial count");
  double worst = 0;
  for (double a : rep.max_advantage) {
    out.require(a <= 0.03 + kTol, "advantage " + fmt12(a) + " > 0.03");
    worst = std::max(worst, a);
  }
  out.require(rep.pass, "experiment verdict FAIL");
  out.detail = "max advantage " + fmt12(worst) + " over 20 keys";
  out.report = report_json(rep);
  return out;
}

// ---------------------------------------------------------------------------
// 11. Determinism: every criterion's fixture yields byte-identical canonical
//     reports on a re-run. The two conflict experiments are re-run at reduced
//     scale (2 keys); their full fixtures are covered by criteria 8 and 9 and
//     byte-identity does not depend on scale.
Outcome crit11() {
  Outcome out;
  g_quiet_info = true;
  std::vector<std::pair<std::string, std::function<json()>>> fixtures = {
      {"criterion1", [] { return crit1().report; }},
      {"criterion2", [] { return crit2().report; }},
      {"criterion3", [] { return crit3().report; }},
      {"criterion4", [] { return crit4().report; }},
      {"criterion5", [] { return crit5().report; }},
      {"criterion6", [] { return crit6().report; }},
      {"criterion7", [] { return crit7().report; }},
      {"criterion10", [] { return crit10().report; }},
      {"decision_conflict_reduced",
       [] {
         DecisionConflictConfig cfg;
         cfg.n = 1 << 12;
         cfg.n_keys = 2;
         return report_json(run_decision_conflict(cfg));
       }},
      {"loss_conflict_reduced", [] {
         LossConflictConfig cfg;
         cfg.n = 1 << 12;
         cfg.n_keys = 2;
         cfg.tolerance = 0.04;
         LossFunction l01({{0.0, 1.0}, {1.0, 0.0}});
         l01.derive_certificate();
         return report_json(run_loss_conflict_experiment(l01, cfg));
       }}};
  for (const auto& [name, gen] : fixtures) {
    std::string a = canonical(gen());
    std::string b = canonical(gen());
    out.require(a == b, name + " reports differ between runs");
  }
  out.detail = std::to_string(fixtures.size()) + " fixtures byte-identical across re-runs";
  out.report = {{"criterion", 11}, {"fixtures", fixtures.size()}};
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::map<int, Outcome (*)()> criteria = {{1, crit1}, {2, crit2},  {3, crit3},  {4, crit4},
                                           {5, crit5}, {6, crit6},  {7, crit7},  {8, crit8},
                                           {9, crit9}, {10, crit10}, {11, crit11}};
  std::vector<int> to_run;
  if (argc > 1) {
    int c = std::atoi(argv[1]);
    if (criteria.count(c) == 0) {
      std::fprintf(stderr, "usage: acceptance [1-11]\n");
      return 1;
    }
    to_run.push_back(c);
  } else {
    for (const auto& [c, fn] : criteria) to_run.push_back(c);
  }
  bool all_pass = true;
  for (int c : to_run) {
    Outcome out;
    try {
      out = criteria[c]();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s\n", out.pass ? "PASS" : "FAIL", c, out.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && out.pass;
  }
  return all_pass ? 0 : 1;
}
