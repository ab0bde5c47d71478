#include "calibra/reference.hpp"

#include <cmath>
#include <vector>

namespace calibra::reference {

namespace {

bool in_group(const Group& S, uint32_t x) {
  for (uint32_t m : S.members)
    if (m == x) return true;
  return false;
}

// index of the half-open interval [i*lambda, (i+1)*lambda) containing v,
// last interval closed at 1; found by linear scan
int interval_of(double v, double lambda) {
  int bins = static_cast<int>(std::lround(1.0 / lambda));
  for (int i = 0; i < bins - 1; ++i)
    if (v >= i * lambda && v < (i + 1) * lambda) return i;
  return bins - 1;
}

}  // namespace

double joint_mass(const Population& pop, const Predictor& pred, const Group& S, int t) {
  double m = 0;
  for (int x = 0; x < pred.size(); ++x)
    if (in_group(S, static_cast<uint32_t>(x))) m += pop.weight(x) * pred(x)[t];
  return m;
}

double ma_cw_error(const Population& pop, const Nature& nature, const Predictor& pred,
                   const GroupCollection& C) {
  double worst = 0;
  for (int gi = 0; gi < C.size(); ++gi)
    for (int t = 0; t < pred.k(); ++t) {
      double gap = reference::joint_mass(pop, nature.assignment, C[gi], t) -
                   reference::joint_mass(pop, pred, C[gi], t);
      if (std::abs(gap) > worst) worst = std::abs(gap);
    }
  return worst;
}

double ma_threshold_error(const Population& pop, const Nature& nature, const Predictor& pred,
                          const GroupCollection& C) {
  double worst = 0;
  for (int gi = 0; gi < C.size(); ++gi)
    for (int tau = 1; tau <= pred.k() - 1; ++tau) {
      double gap = 0;
      for (int t = tau; t < pred.k(); ++t)
        gap += reference::joint_mass(pop, nature.assignment, C[gi], t) -
               reference::joint_mass(pop, pred, C[gi], t);
      if (std::abs(gap) > worst) worst = std::abs(gap);
    }
  return worst;
}

double mc_cw_error(const Population& pop, const Nature& nature, const Predictor& pred,
                   const GroupCollection& C, double lambda) {
  int bins = static_cast<int>(std::lround(1.0 / lambda));
  double worst = 0;
  for (int gi = 0; gi < C.size(); ++gi)
    for (int t = 0; t < pred.k(); ++t)
      for (int b = 0; b < bins; ++b) {
        double gap = 0;
        for (int x = 0; x < pred.size(); ++x) {
          if (!in_group(C[gi], static_cast<uint32_t>(x))) continue;
          if (interval_of(pred(x)[t], lambda) != b) continue;
          gap += pop.weight(x) * (nature(x)[t] - pred(x)[t]);
        }
        if (std::abs(gap) > worst) worst = std::abs(gap);
      }
  return worst;
}

double mc_full_error(const Population& pop, const Nature& nature, const Predictor& pred,
                     const GroupCollection& C, double lambda) {
  double worst = 0;
  // every element's discretized vector names a candidate cell; scanning all
  // elements covers every realized cell (with repeats, which is harmless)
  for (int gi = 0; gi < C.size(); ++gi)
    for (int cx = 0; cx < pred.size(); ++cx) {
      if (!in_group(C[gi], static_cast<uint32_t>(cx))) continue;
      for (int t = 0; t < pred.k(); ++t) {
        double gap = 0;
        for (int x = 0; x < pred.size(); ++x) {
          if (!in_group(C[gi], static_cast<uint32_t>(x))) continue;
          bool same = true;
          for (int u = 0; u < pred.k(); ++u)
            if (interval_of(pred(x)[u], lambda) != interval_of(pred(cx)[u], lambda)) {
              same = false;
              break;
            }
          if (same) gap += pop.weight(x) * (nature(x)[t] - pred(x)[t]);
        }
        if (std::abs(gap) > worst) worst = std::abs(gap);
      }
    }
  return worst;
}

double mad_error(const Population& pop, const Nature& nature, const Predictor& pred,
                 const AcceptFn& rule, const GroupCollection& C) {
  double worst = 0;
  for (int gi = 0; gi < C.size(); ++gi) {
    double en = 0, ep = 0, mass = 0;
    for (int x = 0; x < pred.size(); ++x) {
      if (!in_group(C[gi], static_cast<uint32_t>(x))) continue;
      en += pop.weight(x) * rule(nature(x));
      ep += pop.weight(x) * rule(pred(x));
      mass += pop.weight(x);
    }
    double gap = std::abs(en / mass - ep / mass);
    if (gap > worst) worst = gap;
  }
  return worst;
}

double exp_loss(const Population& pop, const Nature& nature, const ActionFunction& h,
                const LossFunction& loss) {
  double total = 0;
  for (int x = 0; x < nature.size(); ++x)
    for (int t = 0; t < nature.k(); ++t)
      total += pop.weight(x) * nature(x)[t] *
               (h(x) * loss(t, 1) + (1 - h(x)) * loss(t, 0));
  return total;
}

double mac_error(const Population& pop, const Nature& nature, const ActionFunction& h,
                 const LossFunction& loss, const GroupCollection& C) {
  double worst = 0;
  for (int gi = 0; gi < C.size(); ++gi) {
    double eh = 0, es = 0, mass = 0;
    for (int x = 0; x < nature.size(); ++x) {
      if (!in_group(C[gi], static_cast<uint32_t>(x))) continue;
      double s = 0;
      for (int t = 0; t < nature.k(); ++t) s += nature(x)[t] * loss.gap(t);
      es += pop.weight(x) * (s < 0 ? 1.0 : 0.0);
      eh += pop.weight(x) * h(x);
      mass += pop.weight(x);
    }
    double gap = std::abs(es / mass - eh / mass);
    if (gap > worst) worst = gap;
  }
  return worst;
}

}  // namespace calibra::reference
