#include "calibra/hardness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace calibra {

namespace {

inline uint64_t rotl(uint64_t x, int b) { return (x << b) | (x >> (64 - b)); }

inline void sipround(uint64_t& v0, uint64_t& v1, uint64_t& v2, uint64_t& v3) {
  v0 += v1;
  v1 = rotl(v1, 13);
  v1 ^= v0;
  v0 = rotl(v0, 32);
  v2 += v3;
  v3 = rotl(v3, 16);
  v3 ^= v2;
  v0 += v3;
  v3 = rotl(v3, 21);
  v3 ^= v0;
  v2 += v1;
  v1 = rotl(v1, 17);
  v1 ^= v2;
  v2 = rotl(v2, 32);
}

}  // namespace

uint64_t siphash24(Key128 key, uint64_t index) {
  uint64_t v0 = key.lo ^ 0x736f6d6570736575ULL;
  uint64_t v1 = key.hi ^ 0x646f72616e646f6dULL;
  uint64_t v2 = key.lo ^ 0x6c7967656e657261ULL;
  uint64_t v3 = key.hi ^ 0x7465646279746573ULL;
  uint64_t m = index;  // one 8-byte block, length byte 8 in the tail word
  uint64_t b = 8ULL << 56;
  v3 ^= m;
  sipround(v0, v1, v2, v3);
  sipround(v0, v1, v2, v3);
  v0 ^= m;
  v3 ^= b;
  sipround(v0, v1, v2, v3);
  sipround(v0, v1, v2, v3);
  v0 ^= b;
  v2 ^= 0xff;
  sipround(v0, v1, v2, v3);
  sipround(v0, v1, v2, v3);
  sipround(v0, v1, v2, v3);
  sipround(v0, v1, v2, v3);
  return v0 ^ v1 ^ v2 ^ v3;
}

double prf_uniform(Key128 key, uint64_t index) {
  return static_cast<double>(siphash24(key, index) >> 11) * 0x1.0p-53;
}

PseudorandomSubset pr_subset(Key128 key, double gamma, const Population& pop) {
  if (!(gamma > 0 && gamma < 1)) throw std::invalid_argument("pr_subset: gamma in (0,1)");
  const int n = pop.size();
  for (double w : pop.weights)
    if (std::abs(w - 1.0 / n) > kSimplexTol)
      throw std::invalid_argument("pr_subset: population must be uniform-weighted");
  PseudorandomSubset s;
  s.key = key;
  s.gamma = gamma;
  s.mask.assign(n, 0);
  for (int x = 0; x < n; ++x)
    if (prf_uniform(key, static_cast<uint64_t>(x)) < gamma) {
      s.mask[x] = 1;
      s.members.push_back(static_cast<uint32_t>(x));
    }
  s.realized_fraction = static_cast<double>(s.members.size()) / n;
  if (s.members.empty() || static_cast<int>(s.members.size()) == n)
    throw std::runtime_error("pr_subset: degenerate realized subset, re-key");
  double sigma4 = 4.0 * std::sqrt(gamma * (1 - gamma) / n);
  if (std::abs(s.realized_fraction - gamma) > sigma4)
    throw std::runtime_error("pr_subset: realized fraction outside 4 sigma, re-key");
  return s;
}

double indistinguishability_probe(const PseudorandomSubset& subset, const GroupCollection& probes,
                                  const Population& pop) {
  double worst = 0;
  for (const auto& P : probes.groups) {
    double mass = 0, inter = 0;
    for (uint32_t x : P.members) {
      mass += pop.weight(x);
      if (subset.contains(x)) inter += pop.weight(x);
    }
    if (mass < 0.01)
      throw std::invalid_argument("indistinguishability_probe: probe below 1% of the domain: " +
                                  P.id);
    worst = std::max(worst, std::abs(inter / mass - subset.realized_fraction));
  }
  return worst;
}

Nature nature_two_block(const PseudorandomSubset& subset, int n, const StochasticVector& y,
                        const StochasticVector& y2) {
  std::vector<StochasticVector> rows;
  rows.reserve(n);
  for (int x = 0; x < n; ++x)
    rows.push_back(subset.contains(static_cast<uint32_t>(x)) ? y : y2);
  return Nature(Predictor(std::move(rows)));
}

LossConflictInstance nature_loss_conflict(const LossFunction& loss, const Population& pop,
                                          Key128 key) {
  if (!loss.cert)
    throw std::invalid_argument("nature_loss_conflict: nontriviality certificate required");
  double gr = loss.gap(loss.cert->t_reject);
  double ga = -loss.gap(loss.cert->t_accept);
  LossConflictInstance inst;
  inst.reject_dominant = gr >= ga;
  inst.t_major = inst.reject_dominant ? loss.cert->t_reject : loss.cert->t_accept;
  inst.t_minor = inst.reject_dominant ? loss.cert->t_accept : loss.cert->t_reject;
  inst.subset = pr_subset(key, 0.75, pop);
  inst.nature = nature_two_block(inst.subset, pop.size(), unit_vector(inst.t_major, loss.k()),
                                 unit_vector(inst.t_minor, loss.k()));
  return inst;
}

GroupCollection key_oblivious_groups(int n, int count, double fraction, uint64_t seed) {
  std::vector<Group> gs;
  std::vector<uint32_t> all(n);
  for (int x = 0; x < n; ++x) all[x] = static_cast<uint32_t>(x);
  gs.emplace_back("all", std::move(all));
  for (int i = 1; i <= count; ++i) {
    std::vector<uint32_t> members;
    for (int x = 0; x < n; ++x) {
      double u = static_cast<double>(
                     RandomStream::at(seed, static_cast<uint64_t>(i), static_cast<uint64_t>(x)) >>
                     11) *
                 0x1.0p-53;
      if (u < fraction) members.push_back(static_cast<uint32_t>(x));
    }
    gs.emplace_back("g" + std::to_string(i), std::move(members));
  }
  return GroupCollection(std::move(gs));
}

namespace {

Key128 fresh_key(RandomStream& rng) {
  Key128 k;
  k.hi = rng.next_u64();
  k.lo = rng.next_u64();
  return k;
}

PseudorandomSubset subset_with_retry(RandomStream& rng, double gamma, const Population& pop) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    try {
      return pr_subset(fresh_key(rng), gamma, pop);
    } catch (const std::runtime_error&) {
      // atypical realization: draw a fresh key
    }
  }
  throw std::runtime_error("pr_subset: no acceptable key after 64 attempts");
}

}  // namespace

ConflictReport run_decision_conflict_experiment(const DecisionRule& rule,
                                                const AffinenessCertificate& cert,
                                                const LipschitzEstimate& lip,
                                                const DecisionConflictConfig& config) {
  if (cert.epsilon <= 1e-9)
    throw std::invalid_argument(
        "decision-conflict: rule is affine at the probed resolution, hypothesis violated");
  double M = lip.finite ? std::max(lip.bound, config.M) : config.M;
  double eps = cert.epsilon;
  if (config.lambda > 3.0 * eps / M + 1e-12)
    throw std::invalid_argument("decision-conflict: lambda out of regime (needs lambda <= 3*eps/M)");

  const int n = config.n;
  const int k = cert.y.k();
  Population pop = Population::uniform(n);
  double tol = 4.0 * k / std::sqrt(static_cast<double>(n)) + 2.0 * M * config.lambda;

  ConflictReport rep;
  rep.experiment = "decision_conflict";
  rep.theorem_bound = eps / 2;
  rep.tolerance = tol;
  rep.dconfig = config;
  rep.dtrials.resize(config.n_keys);

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < config.n_keys; ++i) {
    DecisionConflictTrial trial;
    trial.trial_seed = config.seed + static_cast<uint64_t>(i);
    RandomStream rng(config.seed, 0xDC00 + static_cast<uint64_t>(i));
    double width = M / (eps * config.kappa_eff);
    double nu = (2.0 * rng.next_double() - 1.0) * width;
    trial.gamma_nu = std::clamp(cert.gamma + nu, 0.02, 0.98);
    PseudorandomSubset subset = subset_with_retry(rng, trial.gamma_nu, pop);
    trial.realized_gamma = subset.realized_fraction;
    Nature nature = nature_two_block(subset, n, cert.y, cert.y2);
    GroupCollection C = key_oblivious_groups(n, config.n_groups, config.group_fraction,
                                             RandomStream::mix(trial.trial_seed ^ 0x6f0b));

    LearnerConfig lc;
    lc.mode = LearnMode::McCw;
    lc.alpha = config.alpha;
    lc.lambda = config.lambda;
    lc.seed = trial.trial_seed;
    TypeSpace ts(k);
    auto [pred, tracev] = learn_multicalibrated(pop, nature, C, ts, lc);
    trial.learner_converged = tracev.converged;
    trial.mc_cw = mc_cw_error(pop, nature, pred, C, Discretization(config.lambda)).max_gap;
    trial.mad = mad_error(pop, nature, pred, rule.as_fn(), C).max_gap;
    trial.pass = trial.learner_converged && trial.mc_cw <= config.alpha &&
                 trial.mad >= eps / 2 - tol;

    // blend invariant on the largest cell of the learned predictor
    CanonicalPartition part = canonical_partition(pop, nature, pred, Discretization(config.lambda));
    size_t big = 0;
    double bigmass = -1;
    for (size_t ci = 0; ci < part.cells.size(); ++ci) {
      double m = 0;
      for (uint32_t x : part.cells[ci]) m += pop.weight(x);
      if (m > bigmass) {
        bigmass = m;
        big = ci;
      }
    }
    double inblock = 0, mass = 0;
    std::vector<double> avg(k, 0.0);
    for (uint32_t x : part.cells[big]) {
      double w = pop.weight(x);
      mass += w;
      if (subset.contains(x)) inblock += w;
      for (int t = 0; t < k; ++t) avg[t] += w * pred(x)[t];
    }
    double gtilde = inblock / mass;
    trial.blend_dev = 0;
    for (int t = 0; t < k; ++t)
      trial.blend_dev = std::max(
          trial.blend_dev,
          std::abs(avg[t] / mass - (gtilde * cert.y[t] + (1 - gtilde) * cert.y2[t])));
    trial.blend_bound = 3.0 * k * config.alpha / (config.lambda * config.lambda) + config.lambda;
    trial.pass = trial.pass && trial.blend_dev <= trial.blend_bound;

    if (config.run_key_aware) {
      std::vector<Group> gs = C.groups;
      gs.emplace_back("subset", subset.members);
      GroupCollection Cka(std::move(gs));
      auto [pred2, trace2] = learn_multicalibrated(pop, nature, Cka, ts, lc);
      AuditReport madr = mad_error(pop, nature, pred2, rule.as_fn(), Cka);
      double excess = -1;
      for (const auto& c : madr.constraints)
        excess = std::max(excess, std::abs(c.gap) - k * config.alpha / c.group_mass);
      trial.key_aware_excess = excess;
      trial.key_aware_ok = trace2.converged && excess <= 0.02;
    } else {
      trial.key_aware_ok = true;
    }
    rep.dtrials[i] = trial;
  }

  rep.pass = true;
  for (const auto& t : rep.dtrials) rep.pass = rep.pass && t.pass && t.key_aware_ok;
  return rep;
}

ConflictReport run_loss_conflict_experiment(const LossFunction& loss,
                                            const LossConflictConfig& config) {
  if (!loss.cert)
    throw std::invalid_argument("loss-conflict: nontriviality certificate required");
  const int n = config.n;
  Population pop = Population::uniform(n);
  double alpha = loss.cert->alpha;
  double required = alpha / 8 - config.eps_ac * (2 - 0.75 * alpha) - config.tolerance;

  ConflictReport rep;
  rep.experiment = "loss_conflict";
  rep.theorem_bound = required;
  rep.tolerance = config.tolerance;
  rep.eps_ac = config.eps_ac;
  rep.vacuous = config.eps_ac >= 1.0;
  rep.ltrials.resize(config.n_keys);

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < config.n_keys; ++i) {
    LossConflictTrial trial;
    trial.trial_seed = config.seed + static_cast<uint64_t>(i);
    RandomStream rng(config.seed, 0x1C00 + static_cast<uint64_t>(i));
    LossConflictInstance inst = [&] {
      for (int attempt = 0;; ++attempt) {
        try {
          return nature_loss_conflict(loss, pop, fresh_key(rng));
        } catch (const std::runtime_error&) {
          if (attempt >= 64) throw;
        }
      }
    }();
    trial.realized_gamma = inst.subset.realized_fraction;

    ActionFunction hstar = loss_min_actions(inst.nature, loss);
    double accept_mass = 0;
    for (int x = 0; x < n; ++x) accept_mass += pop.weight(x) * hstar(x);
    trial.hstar_accept_mass = accept_mass;

    std::vector<ActionFunction> constants;
    constants.emplace_back(std::vector<double>(n, 0.0));
    constants.emplace_back(std::vector<double>(n, 1.0));
    double l0 = exp_loss(pop, inst.nature, constants[0], loss);
    double l1 = exp_loss(pop, inst.nature, constants[1], loss);
    trial.l1_minus_l0 = inst.reject_dominant ? (l1 - l0) : (l0 - l1);

    GroupCollection C = key_oblivious_groups(n, config.n_groups, config.group_fraction,
                                             RandomStream::mix(trial.trial_seed ^ 0x77aa));
    LearnerConfig lc;
    lc.mode = LearnMode::McCw;
    lc.alpha = config.alpha_learn;
    lc.lambda = config.lambda;
    lc.seed = trial.trial_seed;
    auto [pred, tracev] = learn_multicalibrated(pop, inst.nature, C, TypeSpace(loss.k()), lc);
    trial.learner_converged = tracev.converged;

    std::vector<ActionFunction> battery = constants;
    for (int gi = 1; gi < C.size(); ++gi) {
      std::vector<double> ind(n, 0.0), comp(n, 1.0);
      for (uint32_t x : C[gi].members) {
        ind[x] = 1.0;
        comp[x] = 0.0;
      }
      battery.emplace_back(std::move(ind));
      battery.emplace_back(std::move(comp));
    }
    battery.push_back(compose(mac_rule(loss), pred));
    battery.push_back(compose(loss_min_rule(loss), pred));
    trial.battery_size = static_cast<int>(battery.size());

    GroupCollection Cx(std::vector<Group>{C[0]});  // MAC w.r.t. the full support
    trial.min_pass_gap = std::numeric_limits<double>::infinity();
    bool all_pass = true;
    for (const auto& h : battery) {
      double mac = mac_error(pop, inst.nature, h, loss, Cx).max_gap;
      if (mac > config.eps_ac) continue;
      ++trial.mac_accurate_count;
      double gap = loss_gap(pop, inst.nature, h, loss, constants);
      trial.min_pass_gap = std::min(trial.min_pass_gap, gap);
      if (gap < required) all_pass = false;
    }
    trial.key_aware_mac = mac_error(pop, inst.nature, hstar, loss, Cx).max_gap;
    trial.key_aware_loss_gap = loss_gap(pop, inst.nature, hstar, loss, constants);
    trial.pass = trial.learner_converged && all_pass && trial.mac_accurate_count > 0 &&
                 trial.key_aware_mac <= 0.01 && trial.key_aware_loss_gap < 0 &&
                 trial.l1_minus_l0 >= alpha / 2 - config.tolerance;
    rep.ltrials[i] = trial;
  }

  rep.pass = !rep.vacuous;
  for (const auto& t : rep.ltrials) rep.pass = rep.pass && t.pass;
  return rep;
}

FractionPreservationReport run_fraction_preservation(const FractionPreservationConfig& config) {
  Population pop = Population::uniform(config.n);
  FractionPreservationReport rep;
  rep.config = config;
  rep.max_advantage.resize(config.n_keys);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < config.n_keys; ++i) {
    RandomStream rng(config.seed, 0xF200 + static_cast<uint64_t>(i));
    PseudorandomSubset subset = subset_with_retry(rng, config.gamma, pop);
    std::vector<Group> probes;
    for (int p = 0; p < config.n_probes; ++p) {
      std::vector<uint32_t> members;
      uint64_t pseed = RandomStream::mix(config.seed ^ (0x9100 + static_cast<uint64_t>(p)));
      for (int x = 0; x < config.n; ++x) {
        double u = static_cast<double>(RandomStream::at(pseed, static_cast<uint64_t>(i),
                                                        static_cast<uint64_t>(x)) >>
                                       11) *
                   0x1.0p-53;
        if (u < config.probe_fraction) members.push_back(static_cast<uint32_t>(x));
      }
      probes.emplace_back("p" + std::to_string(p), std::move(members));
    }
    rep.max_advantage[i] =
        indistinguishability_probe(subset, GroupCollection(std::move(probes)), pop);
  }
  rep.pass = true;
  for (double a : rep.max_advantage) rep.pass = rep.pass && a <= config.advantage_bound;
  return rep;
}

}  // namespace calibra
