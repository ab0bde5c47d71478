#pragma once
// Audit-and-update learners: repair the worst violated constraint until the
// audit passes, with an L2-potential step size that guarantees termination
// well inside the iteration cap. Also the relaxation pipelines built on a
// scalar target and the loss-family distinguisher learner.

#include <optional>
#include <utility>

#include "calibra/core.hpp"
#include "calibra/metrics.hpp"

namespace calibra {

enum class LearnMode { MaCw, MaThreshold, McCw, McFull, ScalarMc };

struct LearnerConfig {
  double alpha = 0.01;
  double lambda = 0.25;   // MC modes
  double eta = 0;         // 0: alpha/2 (alpha/(2k) in threshold mode)
  long max_iter = 0;      // 0: ceil(64*log(k+1)/alpha^2)
  LearnMode mode = LearnMode::MaCw;
  uint64_t seed = 0;
};

struct TraceRecord {
  long iter = 0;
  std::string group;
  int type = -1;
  int threshold = -1;
  int bin = -1;
  std::string cell;
  double gap = 0;
  double eta = 0;
};

struct LearnTrace {
  long iterations = 0;
  bool converged = true;
  double final_gap = 0;
  std::vector<TraceRecord> records;
};

struct Violation {
  int group = -1;  // index into C
  std::string group_id;
  int type = -1;
  int threshold = -1;
  int bin = -1;
  std::string cell;
  double gap = 0;
};

// Maximum-|gap| constraint with |gap| > cfg.alpha under the active mode's
// metric, or nullopt. Ties broken lexicographically by
// (group id, type/threshold, bin/cell).
std::optional<Violation> audit(const Population& pop, const Nature& nature, const Predictor& pred,
                               const GroupCollection& C, const TypeSpace& ts,
                               const LearnerConfig& cfg);

std::pair<Predictor, LearnTrace> learn_multiaccurate(const Population& pop, const Nature& nature,
                                                     const GroupCollection& C, const TypeSpace& ts,
                                                     const LearnerConfig& cfg);

std::pair<Predictor, LearnTrace> learn_multicalibrated(const Population& pop, const Nature& nature,
                                                       const GroupCollection& C, const TypeSpace& ts,
                                                       const LearnerConfig& cfg);

// q*(x) = sum_beta beta * nature(x)_beta for numeric type spaces
std::vector<double> expectation_target(const Nature& nature, const TypeSpace& ts);

// p*(x) = (1 - sum_t (l(t,1)-l(t,0)) * nature(x)_t) / 2
std::vector<double> loss_weighted_target(const Nature& nature, const LossFunction& loss);

// one-dimensional multi-calibration via the (p, 1-p) encoding
std::pair<std::vector<double>, LearnTrace> learn_scalar_calibrated(const Population& pop,
                                                                   const std::vector<double>& targets,
                                                                   const GroupCollection& C,
                                                                   const LearnerConfig& cfg);

std::pair<Predictor, LearnTrace> learn_oi_loss_family(const Population& pop, const Nature& nature,
                                                      const std::vector<ActionFunction>& H,
                                                      const std::vector<LossFunction>& L,
                                                      double epsilon, const LearnerConfig& cfg);

struct CanonicalPartition {
  std::vector<std::string> cell_ids;             // lexicographic by bin vector
  std::vector<std::vector<uint32_t>> cells;      // elements per cell
  std::vector<int> cell_of;                      // element -> cell index
  Predictor canonical;                           // R^T, constant per cell
};

CanonicalPartition canonical_partition(const Population& pop, const Nature& nature,
                                       const Predictor& pred, const Discretization& d);

// compose(loss_min_rule(loss), pred) plus the certified bound 3k(alpha+lambda)
// with alpha the measured full-MC error over C
std::pair<ActionFunction, double> omnipredict(const Population& pop, const Nature& nature,
                                              const Predictor& pred, const LossFunction& loss,
                                              const GroupCollection& C, const Discretization& d);

// indicator action functions of every set in C and every complement
std::vector<ActionFunction> indicator_class(const GroupCollection& C, int n);

}  // namespace calibra
