#pragma once
// Decision-rule algebra: construction, affineness and Lipschitz analysis,
// loss-minimizing rules, random instantiation and composition.

#include <optional>

#include "calibra/core.hpp"
#include "calibra/metrics.hpp"

namespace calibra {

struct DecisionRule {
  enum class Kind { Ita, Threshold, LossMin, Custom };

  Kind kind = Kind::Custom;
  int k = 0;
  std::vector<double> g;              // ITA per-type acceptance probabilities
  int tau = -1;                       // Threshold rank cutoff (rank <= tau accepts)
  std::optional<LossFunction> loss;   // LossMin
  AcceptFn fn;

  double accept(const StochasticVector& y) const { return fn(y); }
  const AcceptFn& as_fn() const { return fn; }
};

DecisionRule ita_rule(const std::vector<double>& g);
// deterministic monotone rule on rankings: accept a sampled type iff its
// rank (1-based, rank 1 best) is at most tau
DecisionRule threshold_rule(int tau, int k);
DecisionRule loss_min_rule(const LossFunction& loss);
DecisionRule mac_rule(const LossFunction& loss);
DecisionRule custom_rule(int k, AcceptFn fn);

DecisionRule affine_projection(const DecisionRule& rule);

struct AffinenessCertificate {
  double epsilon = 0;  // certified lower bound on distance from affine
  StochasticVector y, y2;
  double gamma = 0.5;
  int grid_m = 0;

  double replay(const DecisionRule& rule) const;  // violation at the witness
};

// Grid-search lower bound on the distance from affine. Probes the step-1/m
// simplex lattice for k <= 4 (plus 10*m^2 seeded random pairs for k > 4)
// and always all unit-vector pairs; gamma ranges over {1/m..(m-1)/m} + {1/2}.
AffinenessCertificate affineness_distance(const DecisionRule& rule, int m, uint64_t seed = 0);

struct LipschitzEstimate {
  double bound = 0;   // lower bound on the true constant
  bool finite = true; // false: a jump survived bisection ("no finite certificate")
  StochasticVector y, y2;
};

LipschitzEstimate lipschitz_estimate(const DecisionRule& rule, int m, uint64_t seed = 0);

Nature random_instantiation(const Predictor& pred, const RandomStream& rng);

ActionFunction compose(const DecisionRule& rule, const Predictor& pred);

// step-1/m lattice on the k-simplex, lexicographic order
std::vector<StochasticVector> simplex_grid(int k, int m);

}  // namespace calibra
