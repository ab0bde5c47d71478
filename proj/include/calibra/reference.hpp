#pragma once
// Serial brute-force re-implementations of every auditor, written as plain
// nested loops with no shared code paths, no caching and no OpenMP. They are
// the ground-truth oracle for the parallel kernels (see tests and the
// benchmark target) and intentionally favor obviousness over speed.

#include "calibra/metrics.hpp"

namespace calibra::reference {

double joint_mass(const Population& pop, const Predictor& pred, const Group& S, int t);
double ma_cw_error(const Population& pop, const Nature& nature, const Predictor& pred,
                   const GroupCollection& C);
double ma_threshold_error(const Population& pop, const Nature& nature, const Predictor& pred,
                          const GroupCollection& C);
double mc_cw_error(const Population& pop, const Nature& nature, const Predictor& pred,
                   const GroupCollection& C, double lambda);
double mc_full_error(const Population& pop, const Nature& nature, const Predictor& pred,
                     const GroupCollection& C, double lambda);
double mad_error(const Population& pop, const Nature& nature, const Predictor& pred,
                 const AcceptFn& rule, const GroupCollection& C);
double exp_loss(const Population& pop, const Nature& nature, const ActionFunction& h,
                const LossFunction& loss);
double mac_error(const Population& pop, const Nature& nature, const ActionFunction& h,
                 const LossFunction& loss, const GroupCollection& C);

}  // namespace calibra::reference
