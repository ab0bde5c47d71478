#pragma once
// Keyed pseudorandom subsets and the desk-scale surrogates for the two
// computational impossibility results: calibrated-but-decision-inaccurate
// natures for far-from-affine rules, and loss-minimization vs
// classification-accuracy conflicts. "Efficient" is operationalized as
// key-oblivious: every learner and probe in the battery is built without
// the subset key, and the key-aware baselines are always run alongside.

#include "calibra/core.hpp"
#include "calibra/learn.hpp"
#include "calibra/metrics.hpp"
#include "calibra/rules.hpp"

namespace calibra {

struct Key128 {
  uint64_t hi = 0, lo = 0;
};

// SipHash-2-4 of the element index under a 128-bit key, mapped to [0,1)
uint64_t siphash24(Key128 key, uint64_t index);
double prf_uniform(Key128 key, uint64_t index);

struct PseudorandomSubset {
  Key128 key;
  double gamma = 0;             // target fraction
  double realized_fraction = 0;
  std::vector<uint32_t> members;
  std::vector<uint8_t> mask;

  bool contains(uint32_t x) const { return mask[x] != 0; }
};

PseudorandomSubset pr_subset(Key128 key, double gamma, const Population& pop);

// max over probe sets P of |Pr[x in X1 | x in P] - realized gamma|
double indistinguishability_probe(const PseudorandomSubset& subset, const GroupCollection& probes,
                                  const Population& pop);

Nature nature_two_block(const PseudorandomSubset& subset, int n, const StochasticVector& y,
                        const StochasticVector& y2);

struct LossConflictInstance {
  Nature nature;
  PseudorandomSubset subset;   // the 3/4-mass majority block
  int t_major = -1;            // type assigned to the majority block
  int t_minor = -1;
  bool reject_dominant = true; // majority block prefers rejection (h* accepts mass 1/4)
};

LossConflictInstance nature_loss_conflict(const LossFunction& loss, const Population& pop,
                                          Key128 key);

// key-oblivious random groups: membership by a seeded index hash, never the
// subset key; group 0 is always the full domain
GroupCollection key_oblivious_groups(int n, int count, double fraction, uint64_t seed);

struct DecisionConflictConfig {
  int n = 1 << 16;
  double lambda = 0.125;
  double alpha = 0.01;
  double M = 1.0;          // Lipschitz knob: gamma-perturbation width M/(eps*kappa_eff)
  double kappa_eff = 64;
  int n_groups = 8;
  double group_fraction = 0.25;
  int n_keys = 20;
  uint64_t seed = 1;
  bool run_key_aware = true;
};

struct DecisionConflictTrial {
  uint64_t trial_seed = 0;
  double gamma_nu = 0;          // perturbed target fraction
  double realized_gamma = 0;
  double mc_cw = 0;             // calibration error of the key-oblivious learner
  double mad = 0;               // decision gap of the same predictor
  bool learner_converged = false;
  bool pass = false;
  // key-aware control: worst per-group excess of mad gap over k*alpha/delta
  double key_aware_excess = 0;
  bool key_aware_ok = false;
  // largest-cell blend invariant: ||avg pred - (g~ y + (1-g~) y')||_inf and its bound
  double blend_dev = 0;
  double blend_bound = 0;
};

struct LossConflictTrial {
  uint64_t trial_seed = 0;
  double realized_gamma = 0;
  double hstar_accept_mass = 0;
  double l1_minus_l0 = 0;          // on realized masses (reject-dominant sign)
  int battery_size = 0;
  int mac_accurate_count = 0;
  double min_pass_gap = 0;         // min loss_gap among MAC-accurate battery members
  double key_aware_mac = 0;
  double key_aware_loss_gap = 0;
  bool learner_converged = false;
  bool pass = false;
};

struct ConflictReport {
  std::string experiment;
  double theorem_bound = 0;
  double tolerance = 0;
  bool vacuous = false;
  bool pass = false;
  DecisionConflictConfig dconfig;  // echoed config (decision experiment)
  std::vector<DecisionConflictTrial> dtrials;
  std::vector<LossConflictTrial> ltrials;
  double eps_ac = 0;               // loss experiment
};

ConflictReport run_decision_conflict_experiment(const DecisionRule& rule,
                                                const AffinenessCertificate& cert,
                                                const LipschitzEstimate& lip,
                                                const DecisionConflictConfig& config);

struct LossConflictConfig {
  int n = 1 << 16;
  double eps_ac = 0.0125;
  double alpha_learn = 0.01;
  double lambda = 0.125;
  double tolerance = 0.01;
  int n_groups = 8;
  double group_fraction = 0.25;
  int n_keys = 20;
  uint64_t seed = 1;
};

ConflictReport run_loss_conflict_experiment(const LossFunction& loss,
                                            const LossConflictConfig& config);

struct FractionPreservationConfig {
  int n = 1 << 16;
  double gamma = 0.5;
  double probe_fraction = 0.25;
  int n_probes = 64;
  int n_keys = 20;
  double advantage_bound = 0.03;
  uint64_t seed = 1;
};

struct FractionPreservationReport {
  FractionPreservationConfig config;
  std::vector<double> max_advantage;  // per keyed trial
  bool pass = false;
};

FractionPreservationReport run_fraction_preservation(const FractionPreservationConfig& config);

}  // namespace calibra
