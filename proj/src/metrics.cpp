#include "calibra/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace calibra {

void AuditReport::finalize() {
  max_gap = 0;
  witness = constraints.empty() ? -1 : 0;
  for (size_t i = 0; i < constraints.size(); ++i) {
    double a = std::abs(constraints[i].gap);
    if (a > max_gap) {
      max_gap = a;
      witness = static_cast<int>(i);
    }
  }
}

ActionFunction::ActionFunction(std::vector<double> a) : accept(std::move(a)) {
  for (double v : accept)
    if (!(v >= 0 && v <= 1)) throw std::invalid_argument("action function: value outside [0,1]");
}

double joint_mass(const Population& pop, const Predictor& pred, const Group& S, int t) {
  double m = 0;
  for (uint32_t x : S.members) m += pop.weight(x) * pred(x)[t];
  return m;
}

double group_mass(const Population& pop, const Group& S) {
  double m = 0;
  for (uint32_t x : S.members) m += pop.weight(x);
  return m;
}

AuditReport ma_error(const Population& pop, const Nature& nature, const Predictor& pred,
                     const GroupCollection& C, MaMode mode, const TypeSpace& ts) {
  if (mode == MaMode::Threshold && !ts.ordered)
    throw std::invalid_argument("ma_error: threshold mode requires ordered types");
  const int k = ts.k;
  const int per = (mode == MaMode::CoordinateWise) ? k : k - 1;
  AuditReport rep;
  rep.metric = (mode == MaMode::CoordinateWise) ? "ma_cw" : "ma_threshold";
  rep.constraints.resize(static_cast<size_t>(C.size()) * per);
#pragma omp parallel for schedule(dynamic)
  for (int gi = 0; gi < C.size(); ++gi) {
    const Group& S = C[gi];
    double delta = group_mass(pop, S);
    std::vector<double> dn(k, 0.0), dp(k, 0.0);
    for (uint32_t x : S.members) {
      double w = pop.weight(x);
      for (int t = 0; t < k; ++t) {
        dn[t] += w * nature(x)[t];
        dp[t] += w * pred(x)[t];
      }
    }
    if (mode == MaMode::CoordinateWise) {
      for (int t = 0; t < k; ++t) {
        ConstraintGap& c = rep.constraints[static_cast<size_t>(gi) * per + t];
        c.group_id = S.id;
        c.type = t;
        c.gap = dn[t] - dp[t];
        c.group_mass = delta;
        c.constraint_mass = delta;
      }
    } else {
      // tail event r(x) > tau, tau in 1..k-1: ranks tau+1..k are 0-based
      // coordinates tau..k-1
      for (int tau = 1; tau <= k - 1; ++tau) {
        double tn = 0, tp = 0;
        for (int t = tau; t < k; ++t) {
          tn += dn[t];
          tp += dp[t];
        }
        ConstraintGap& c = rep.constraints[static_cast<size_t>(gi) * per + (tau - 1)];
        c.group_id = S.id;
        c.threshold = tau;
        c.gap = tn - tp;
        c.group_mass = delta;
        c.constraint_mass = delta;
      }
    }
  }
  rep.finalize();
  return rep;
}

AuditReport mc_cw_error(const Population& pop, const Nature& nature, const Predictor& pred,
                        const GroupCollection& C, const Discretization& d) {
  const int k = pred.k();
  AuditReport rep;
  rep.metric = "mc_cw";
  std::vector<std::vector<ConstraintGap>> per_group(C.size());
#pragma omp parallel for schedule(dynamic)
  for (int gi = 0; gi < C.size(); ++gi) {
    const Group& S = C[gi];
    double delta = group_mass(pop, S);
    std::vector<double> dn(static_cast<size_t>(k) * d.bins, 0.0);
    std::vector<double> dp(static_cast<size_t>(k) * d.bins, 0.0);
    std::vector<double> dm(static_cast<size_t>(k) * d.bins, 0.0);
    for (uint32_t x : S.members) {
      double w = pop.weight(x);
      for (int t = 0; t < k; ++t) {
        int b = d.bin_of(pred(x)[t]);
        size_t idx = static_cast<size_t>(t) * d.bins + b;
        dn[idx] += w * nature(x)[t];
        dp[idx] += w * pred(x)[t];
        dm[idx] += w;
      }
    }
    for (int t = 0; t < k; ++t)
      for (int b = 0; b < d.bins; ++b) {
        size_t idx = static_cast<size_t>(t) * d.bins + b;
        if (dm[idx] == 0) continue;  // empty level sets are omitted
        ConstraintGap c;
        c.group_id = S.id;
        c.type = t;
        c.bin = b;
        c.gap = dn[idx] - dp[idx];
        c.group_mass = delta;
        c.constraint_mass = dm[idx];
        per_group[gi].push_back(std::move(c));
      }
  }
  for (auto& v : per_group)
    for (auto& c : v) rep.constraints.push_back(std::move(c));
  rep.finalize();
  return rep;
}

std::string cell_id(const std::vector<int>& bins) {
  std::ostringstream ss;
  for (size_t i = 0; i < bins.size(); ++i) {
    if (i) ss << '.';
    ss << bins[i];
  }
  return ss.str();
}

AuditReport mc_full_error(const Population& pop, const Nature& nature, const Predictor& pred,
                          const GroupCollection& C, const Discretization& d) {
  const int k = pred.k();
  const int n = pred.size();
  // realized discretized vector per element, shared across groups
  std::vector<std::vector<int>> elem_cell(n);
  for (int x = 0; x < n; ++x) elem_cell[x] = discretize_bins(pred(x), d);

  AuditReport rep;
  rep.metric = "mc_full";
  std::vector<std::vector<ConstraintGap>> per_group(C.size());
#pragma omp parallel for schedule(dynamic)
  for (int gi = 0; gi < C.size(); ++gi) {
    const Group& S = C[gi];
    double delta = group_mass(pop, S);
    // cells keyed by the discretized vector, ordered lexicographically
    std::map<std::vector<int>, std::pair<std::vector<double>, double>> cells;
    for (uint32_t x : S.members) {
      auto& slot = cells[elem_cell[x]];
      if (slot.first.empty()) slot.first.assign(2 * k, 0.0);
      double w = pop.weight(x);
      for (int t = 0; t < k; ++t) {
        slot.first[t] += w * nature(x)[t];
        slot.first[k + t] += w * pred(x)[t];
      }
      slot.second += w;
    }
    for (const auto& [key, slot] : cells)
      for (int t = 0; t < k; ++t) {
        ConstraintGap c;
        c.group_id = S.id;
        c.type = t;
        c.cell = cell_id(key);
        c.gap = slot.first[t] - slot.first[k + t];
        c.group_mass = delta;
        c.constraint_mass = slot.second;
        per_group[gi].push_back(std::move(c));
      }
  }
  for (auto& v : per_group)
    for (auto& c : v) rep.constraints.push_back(std::move(c));
  rep.finalize();
  return rep;
}

AuditReport mad_error(const Population& pop, const Nature& nature, const Predictor& pred,
                      const AcceptFn& rule, const GroupCollection& C) {
  AuditReport rep;
  rep.metric = "mad";
  rep.constraints.resize(C.size());
  // rule evaluations cached per element (rules may be costly closures)
  const int n = pred.size();
  std::vector<double> rn(n), rp(n);
#pragma omp parallel for schedule(static)
  for (int x = 0; x < n; ++x) {
    rn[x] = rule(nature(x));
    rp[x] = rule(pred(x));
  }
  for (int gi = 0; gi < C.size(); ++gi) {
    const Group& S = C[gi];
    double delta = group_mass(pop, S);
    if (delta <= 0) throw std::invalid_argument("mad_error: zero-mass group " + S.id);
    double en = 0, ep = 0;
    for (uint32_t x : S.members) {
      en += pop.weight(x) * rn[x];
      ep += pop.weight(x) * rp[x];
    }
    ConstraintGap& c = rep.constraints[gi];
    c.group_id = S.id;
    c.gap = en / delta - ep / delta;
    c.group_mass = delta;
    c.constraint_mass = delta;
  }
  rep.finalize();
  return rep;
}

double exp_loss(const Population& pop, const Nature& nature, const ActionFunction& h,
                const LossFunction& loss) {
  double total = 0;
  for (int x = 0; x < nature.size(); ++x) {
    double w = pop.weight(x);
    if (w == 0) continue;
    double lx = 0;
    for (int t = 0; t < nature.k(); ++t)
      lx += nature(x)[t] * (h(x) * loss(t, 1) + (1 - h(x)) * loss(t, 0));
    total += w * lx;
  }
  return total;
}

ActionFunction loss_min_actions(const Nature& nature, const LossFunction& loss) {
  std::vector<double> a(nature.size());
  for (int x = 0; x < nature.size(); ++x) {
    double s = 0;
    for (int t = 0; t < nature.k(); ++t) s += nature(x)[t] * loss.gap(t);
    a[x] = (s < 0) ? 1.0 : 0.0;  // ties broken in favor of rejection
  }
  return ActionFunction(std::move(a));
}

AuditReport mac_error(const Population& pop, const Nature& nature, const ActionFunction& h,
                      const LossFunction& loss, const GroupCollection& C) {
  if (!loss.cert) throw std::invalid_argument("mac_error: loss has no nontriviality certificate");
  ActionFunction hstar = loss_min_actions(nature, loss);
  AuditReport rep;
  rep.metric = "mac";
  rep.constraints.resize(C.size());
  for (int gi = 0; gi < C.size(); ++gi) {
    const Group& S = C[gi];
    double delta = group_mass(pop, S);
    if (delta <= 0) throw std::invalid_argument("mac_error: zero-mass group " + S.id);
    double eh = 0, es = 0;
    for (uint32_t x : S.members) {
      eh += pop.weight(x) * h(x);
      es += pop.weight(x) * hstar(x);
    }
    ConstraintGap& c = rep.constraints[gi];
    c.group_id = S.id;
    c.gap = es / delta - eh / delta;
    c.group_mass = delta;
    c.constraint_mass = delta;
  }
  rep.finalize();
  return rep;
}

double loss_gap(const Population& pop, const Nature& nature, const ActionFunction& h,
                const LossFunction& loss, const std::vector<ActionFunction>& H) {
  if (H.empty()) throw std::invalid_argument("loss_gap: empty comparison class");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& hp : H) best = std::min(best, exp_loss(pop, nature, hp, loss));
  return exp_loss(pop, nature, h, loss) - best;
}

}  // namespace calibra
