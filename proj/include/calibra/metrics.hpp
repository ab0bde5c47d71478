#pragma once
// Exact enumeration-based auditors. Every notion is measured in the
// joint-mass (unconditioned) form unless the definition itself conditions
// on the group; signed gaps are nature-side minus predictor-side.

#include <functional>
#include <string>
#include <vector>

#include "calibra/core.hpp"

namespace calibra {

using AcceptFn = std::function<double(const StochasticVector&)>;

struct ConstraintGap {
  std::string group_id;
  int type = -1;        // coordinate, when applicable
  int threshold = -1;   // tail cutoff tau, threshold mode
  int bin = -1;         // level-set grid bin, mc_cw / scalar modes
  std::string cell;     // realized discretized vector, mc_full mode
  double gap = 0;       // signed: nature minus predictor
  double group_mass = 0;        // delta = Pr[x in S]
  double constraint_mass = 0;   // mass of the level set / cell the gap lives on
};

struct AuditReport {
  std::string metric;
  double max_gap = 0;      // max |gap| over constraints
  int witness = -1;        // index into constraints, -1 when empty
  std::vector<ConstraintGap> constraints;

  void finalize();  // fills max_gap and witness from the table
};

struct ActionFunction {
  std::vector<double> accept;  // element -> acceptance probability

  ActionFunction() = default;
  explicit ActionFunction(std::vector<double> a);
  int size() const { return static_cast<int>(accept.size()); }
  double operator()(int x) const { return accept[x]; }
};

double joint_mass(const Population& pop, const Predictor& pred, const Group& S, int t);
double group_mass(const Population& pop, const Group& S);

enum class MaMode { CoordinateWise, Threshold };

AuditReport ma_error(const Population& pop, const Nature& nature, const Predictor& pred,
                     const GroupCollection& C, MaMode mode, const TypeSpace& ts);

AuditReport mc_cw_error(const Population& pop, const Nature& nature, const Predictor& pred,
                        const GroupCollection& C, const Discretization& d);

AuditReport mc_full_error(const Population& pop, const Nature& nature, const Predictor& pred,
                          const GroupCollection& C, const Discretization& d);

AuditReport mad_error(const Population& pop, const Nature& nature, const Predictor& pred,
                      const AcceptFn& rule, const GroupCollection& C);

double exp_loss(const Population& pop, const Nature& nature, const ActionFunction& h,
                const LossFunction& loss);

// the loss-minimizing action function h*_l = rho*_l composed with nature
ActionFunction loss_min_actions(const Nature& nature, const LossFunction& loss);

AuditReport mac_error(const Population& pop, const Nature& nature, const ActionFunction& h,
                      const LossFunction& loss, const GroupCollection& C);

double loss_gap(const Population& pop, const Nature& nature, const ActionFunction& h,
                const LossFunction& loss, const std::vector<ActionFunction>& H);

std::string cell_id(const std::vector<int>& bins);

}  // namespace calibra
