#include "calibra/learn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace calibra {

namespace {

long default_cap(int k, double alpha) {
  return static_cast<long>(std::ceil(64.0 * std::log(k + 1.0) / (alpha * alpha)));
}

AuditReport mode_report(const Population& pop, const Nature& nature, const Predictor& pred,
                        const GroupCollection& C, const TypeSpace& ts, const LearnerConfig& cfg) {
  switch (cfg.mode) {
    case LearnMode::MaCw:
      return ma_error(pop, nature, pred, C, MaMode::CoordinateWise, ts);
    case LearnMode::MaThreshold:
      return ma_error(pop, nature, pred, C, MaMode::Threshold, ts);
    case LearnMode::McCw:
    case LearnMode::ScalarMc:
      return mc_cw_error(pop, nature, pred, C, Discretization(cfg.lambda));
    case LearnMode::McFull:
      return mc_full_error(pop, nature, pred, C, Discretization(cfg.lambda));
  }
  throw std::logic_error("unreachable");
}

std::optional<Violation> pick_violation(const AuditReport& rep, const GroupCollection& C,
                                        double alpha) {
  const ConstraintGap* best = nullptr;
  auto key = [](const ConstraintGap& c) {
    return std::tie(c.group_id, c.type, c.threshold, c.bin, c.cell);
  };
  for (const auto& c : rep.constraints) {
    if (std::abs(c.gap) <= alpha) continue;
    if (!best || std::abs(c.gap) > std::abs(best->gap) ||
        (std::abs(c.gap) == std::abs(best->gap) && key(c) < key(*best)))
      best = &c;
  }
  if (!best) return std::nullopt;
  Violation v;
  for (int gi = 0; gi < C.size(); ++gi)
    if (C[gi].id == best->group_id) v.group = gi;
  v.group_id = best->group_id;
  v.type = best->type;
  v.threshold = best->threshold;
  v.bin = best->bin;
  v.cell = best->cell;
  v.gap = best->gap;
  return v;
}

std::vector<uint32_t> violation_members(const Violation& v, const Predictor& pred,
                                        const GroupCollection& C, const LearnerConfig& cfg) {
  const Group& S = C[v.group];
  if (cfg.mode == LearnMode::MaCw || cfg.mode == LearnMode::MaThreshold) return S.members;
  Discretization d(cfg.lambda);
  std::vector<uint32_t> out;
  if (cfg.mode == LearnMode::McFull) {
    for (uint32_t x : S.members)
      if (cell_id(discretize_bins(pred(x), d)) == v.cell) out.push_back(x);
  } else {
    for (uint32_t x : S.members)
      if (d.bin_of(pred(x)[v.type]) == v.bin) out.push_back(x);
  }
  return out;
}

std::pair<Predictor, LearnTrace> boost_loop(const Population& pop, const Nature& nature,
                                            const GroupCollection& C, const TypeSpace& ts,
                                            const LearnerConfig& cfg) {
  C.validate_against(pop);
  const int k = ts.k;
  const int n = pop.size();
  double eta = cfg.eta > 0 ? cfg.eta
                           : (cfg.mode == LearnMode::MaThreshold ? cfg.alpha / (2.0 * k)
                                                                 : cfg.alpha / 2.0);
  long cap = cfg.max_iter > 0 ? cfg.max_iter : default_cap(k, cfg.alpha);

  Predictor pred(n, StochasticVector(std::vector<double>(k, 1.0 / k)));
  LearnTrace trace;
  trace.converged = false;
  for (long iter = 0; iter < cap; ++iter) {
    AuditReport rep = mode_report(pop, nature, pred, C, ts, cfg);
    auto v = pick_violation(rep, C, cfg.alpha);
    if (!v) {
      trace.converged = true;
      trace.final_gap = rep.max_gap;
      break;
    }
    trace.iterations = iter + 1;
    double step = (v->gap > 0 ? eta : -eta);
    std::vector<uint32_t> members = violation_members(*v, pred, C, cfg);
    for (uint32_t x : members) {
      std::vector<double> row = pred.rows[x].p;
      if (cfg.mode == LearnMode::MaThreshold) {
        for (int t = v->threshold; t < k; ++t) row[t] += step;
      } else {
        row[v->type] += step;
      }
      pred.rows[x] = simplex_project(row);
    }
    trace.records.push_back(
        {iter, v->group_id, v->type, v->threshold, v->bin, v->cell, v->gap, eta});
  }
  if (!trace.converged)
    trace.final_gap = mode_report(pop, nature, pred, C, ts, cfg).max_gap;
  return {std::move(pred), std::move(trace)};
}

}  // namespace

std::optional<Violation> audit(const Population& pop, const Nature& nature, const Predictor& pred,
                               const GroupCollection& C, const TypeSpace& ts,
                               const LearnerConfig& cfg) {
  return pick_violation(mode_report(pop, nature, pred, C, ts, cfg), C, cfg.alpha);
}

std::pair<Predictor, LearnTrace> learn_multiaccurate(const Population& pop, const Nature& nature,
                                                     const GroupCollection& C, const TypeSpace& ts,
                                                     const LearnerConfig& cfg) {
  if (cfg.mode != LearnMode::MaCw && cfg.mode != LearnMode::MaThreshold)
    throw std::invalid_argument("learn_multiaccurate: mode must be MA-cw or MA-threshold");
  if (cfg.mode == LearnMode::MaThreshold && !ts.ordered)
    throw std::invalid_argument("learn_multiaccurate: threshold mode requires ordered types");
  return boost_loop(pop, nature, C, ts, cfg);
}

std::pair<Predictor, LearnTrace> learn_multicalibrated(const Population& pop, const Nature& nature,
                                                       const GroupCollection& C, const TypeSpace& ts,
                                                       const LearnerConfig& cfg) {
  if (cfg.mode != LearnMode::McCw && cfg.mode != LearnMode::McFull)
    throw std::invalid_argument("learn_multicalibrated: mode must be MC-cw or MC-full");
  return boost_loop(pop, nature, C, ts, cfg);
}

std::vector<double> expectation_target(const Nature& nature, const TypeSpace& ts) {
  if (!ts.values) throw std::invalid_argument("expectation_target: numeric type values required");
  std::vector<double> q(nature.size());
  for (int x = 0; x < nature.size(); ++x) {
    double s = 0;
    for (int t = 0; t < ts.k; ++t) s += (*ts.values)[t] * nature(x)[t];
    q[x] = s;
  }
  return q;
}

std::vector<double> loss_weighted_target(const Nature& nature, const LossFunction& loss) {
  std::vector<double> p(nature.size());
  for (int x = 0; x < nature.size(); ++x) {
    double s = 0;
    for (int t = 0; t < loss.k(); ++t) s += loss.gap(t) * nature(x)[t];
    p[x] = (1.0 - s) / 2.0;
  }
  return p;
}

std::pair<std::vector<double>, LearnTrace> learn_scalar_calibrated(const Population& pop,
                                                                   const std::vector<double>& targets,
                                                                   const GroupCollection& C,
                                                                   const LearnerConfig& cfg) {
  std::vector<StochasticVector> rows;
  rows.reserve(targets.size());
  for (double q : targets) {
    if (!(q >= 0 && q <= 1))
      throw std::invalid_argument("learn_scalar_calibrated: target outside [0,1]");
    rows.push_back(StochasticVector({q, 1 - q}));
  }
  Nature synthetic{Predictor(std::move(rows))};
  LearnerConfig inner = cfg;
  inner.mode = LearnMode::McCw;
  auto [pred, trace] = boost_loop(pop, synthetic, C, TypeSpace(2), inner);
  std::vector<double> out(pred.size());
  for (int x = 0; x < pred.size(); ++x) out[x] = pred(x)[0];
  return {std::move(out), std::move(trace)};
}

std::pair<Predictor, LearnTrace> learn_oi_loss_family(const Population& pop, const Nature& nature,
                                                      const std::vector<ActionFunction>& H,
                                                      const std::vector<LossFunction>& L,
                                                      double epsilon, const LearnerConfig& cfg) {
  if (H.empty() || L.empty())
    throw std::invalid_argument("learn_oi_loss_family: H and L must be nonempty");
  const int n = pop.size();
  const int k = nature.k();
  double eta = cfg.eta > 0 ? cfg.eta : epsilon / (2.0 * k);
  long cap = cfg.max_iter > 0 ? cfg.max_iter : k * default_cap(k, epsilon);

  Predictor pred(n, StochasticVector(std::vector<double>(k, 1.0 / k)));
  LearnTrace trace;
  trace.converged = false;

  // distinguisher for (l,h): p(x) = l(t(x), rho*_l(pred(x))) - l(t(x), h(x));
  // its advantage E_nature[p] - E_pred[p] = sum_x w(x) <nat(x)-pred(x), A(x,.)>
  auto advantage = [&](const LossFunction& l, const ActionFunction& h, bool want_A,
                       std::vector<double>& A) {
    double adv = 0;
    if (want_A) A.assign(static_cast<size_t>(n) * k, 0.0);
    for (int x = 0; x < n; ++x) {
      double s = 0;
      for (int t = 0; t < k; ++t) s += pred(x)[t] * l.gap(t);
      double rho = (s < 0) ? 1.0 : 0.0;
      for (int t = 0; t < k; ++t) {
        double a = (rho * l(t, 1) + (1 - rho) * l(t, 0)) -
                   (h(x) * l(t, 1) + (1 - h(x)) * l(t, 0));
        if (want_A) A[static_cast<size_t>(x) * k + t] = a;
        adv += pop.weight(x) * (nature(x)[t] - pred(x)[t]) * a;
      }
    }
    return adv;
  };

  std::vector<double> scratch;
  for (long iter = 0; iter < cap; ++iter) {
    double best = 0;
    size_t bl = 0, bh = 0;
    for (size_t li = 0; li < L.size(); ++li)
      for (size_t hi = 0; hi < H.size(); ++hi) {
        double adv = advantage(L[li], H[hi], false, scratch);
        if (adv > best) {
          best = adv;
          bl = li;
          bh = hi;
        }
      }
    if (best <= epsilon / 2) {
      trace.converged = true;
      trace.final_gap = best;
      break;
    }
    trace.iterations = iter + 1;
    std::vector<double> A;
    advantage(L[bl], H[bh], true, A);
    for (int x = 0; x < n; ++x) {
      std::vector<double> row = pred.rows[x].p;
      for (int t = 0; t < k; ++t) row[t] += eta * A[static_cast<size_t>(x) * k + t];
      pred.rows[x] = simplex_project(row);
    }
    trace.records.push_back({iter, "loss" + std::to_string(bl) + "/h" + std::to_string(bh), -1, -1,
                             -1, "", best, eta});
  }
  return {std::move(pred), std::move(trace)};
}

CanonicalPartition canonical_partition(const Population& pop, const Nature& nature,
                                       const Predictor& pred, const Discretization& d) {
  const int k = pred.k();
  std::map<std::vector<int>, std::vector<uint32_t>> bycell;
  for (int x = 0; x < pred.size(); ++x)
    bycell[discretize_bins(pred(x), d)].push_back(static_cast<uint32_t>(x));

  CanonicalPartition part;
  part.cell_of.assign(pred.size(), -1);
  std::vector<StochasticVector> rows(pred.size());
  int ci = 0;
  for (const auto& [key, members] : bycell) {
    part.cell_ids.push_back(cell_id(key));
    part.cells.push_back(members);
    std::vector<double> avg(k, 0.0);
    double mass = 0;
    for (uint32_t x : members) {
      for (int t = 0; t < k; ++t) avg[t] += pop.weight(x) * nature(x)[t];
      mass += pop.weight(x);
    }
    if (mass > 0) {
      for (double& v : avg) v /= mass;
    } else {
      // zero-mass cell: fall back to the unweighted average
      avg.assign(k, 0.0);
      for (uint32_t x : members)
        for (int t = 0; t < k; ++t) avg[t] += nature(x)[t] / members.size();
    }
    StochasticVector rv = simplex_project(avg);
    for (uint32_t x : members) {
      part.cell_of[x] = ci;
      rows[x] = rv;
    }
    ++ci;
  }
  part.canonical = Predictor(std::move(rows));
  return part;
}

std::pair<ActionFunction, double> omnipredict(const Population& pop, const Nature& nature,
                                              const Predictor& pred, const LossFunction& loss,
                                              const GroupCollection& C, const Discretization& d) {
  double alpha = mc_full_error(pop, nature, pred, C, d).max_gap;
  std::vector<double> a(pred.size());
  for (int x = 0; x < pred.size(); ++x) {
    double s = 0;
    for (int t = 0; t < pred.k(); ++t) s += pred(x)[t] * loss.gap(t);
    a[x] = (s < 0) ? 1.0 : 0.0;
  }
  double bound = 3.0 * pred.k() * (alpha + d.lambda);
  return {ActionFunction(std::move(a)), bound};
}

std::vector<ActionFunction> indicator_class(const GroupCollection& C, int n) {
  std::vector<ActionFunction> H;
  for (const auto& g : C.groups) {
    std::vector<double> ind(n, 0.0), comp(n, 1.0);
    for (uint32_t x : g.members) {
      ind[x] = 1.0;
      comp[x] = 0.0;
    }
    H.emplace_back(std::move(ind));
    H.emplace_back(std::move(comp));
  }
  return H;
}

}  // namespace calibra
