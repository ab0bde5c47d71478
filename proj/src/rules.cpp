#include "calibra/rules.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace calibra {

DecisionRule ita_rule(const std::vector<double>& g) {
  for (double v : g)
    if (!(v >= 0 && v <= 1)) throw std::invalid_argument("ita_rule: g outside [0,1]");
  DecisionRule r;
  r.kind = DecisionRule::Kind::Ita;
  r.k = static_cast<int>(g.size());
  r.g = g;
  r.fn = [g](const StochasticVector& y) {
    double a = 0;
    for (int t = 0; t < y.k(); ++t) a += y[t] * g[t];
    return a;
  };
  return r;
}

DecisionRule threshold_rule(int tau, int k) {
  if (tau < 1 || tau > k) throw std::invalid_argument("threshold_rule: tau in 1..k");
  std::vector<double> g(k, 0.0);
  for (int t = 0; t < tau; ++t) g[t] = 1.0;  // coordinate t has rank t+1
  DecisionRule r = ita_rule(g);
  r.kind = DecisionRule::Kind::Threshold;
  r.tau = tau;
  return r;
}

DecisionRule loss_min_rule(const LossFunction& loss) {
  DecisionRule r;
  r.kind = DecisionRule::Kind::LossMin;
  r.k = loss.k();
  r.loss = loss;
  LossFunction l = loss;
  r.fn = [l](const StochasticVector& y) {
    double s = 0;
    for (int t = 0; t < y.k(); ++t) s += y[t] * l.gap(t);
    return (s < 0) ? 1.0 : 0.0;  // ties broken in favor of rejection
  };
  return r;
}

DecisionRule mac_rule(const LossFunction& loss) {
  DecisionRule rho = loss_min_rule(loss);
  std::vector<double> g(loss.k());
  for (int t = 0; t < loss.k(); ++t) g[t] = rho.accept(unit_vector(t, loss.k()));
  return ita_rule(g);
}

DecisionRule custom_rule(int k, AcceptFn fn) {
  DecisionRule r;
  r.kind = DecisionRule::Kind::Custom;
  r.k = k;
  r.fn = std::move(fn);
  return r;
}

DecisionRule affine_projection(const DecisionRule& rule) {
  std::vector<double> g(rule.k);
  for (int t = 0; t < rule.k; ++t) g[t] = rule.accept(unit_vector(t, rule.k));
  return ita_rule(g);
}

double AffinenessCertificate::replay(const DecisionRule& rule) const {
  std::vector<double> mixv(y.k());
  for (int t = 0; t < y.k(); ++t) mixv[t] = gamma * y[t] + (1 - gamma) * y2[t];
  StochasticVector mix = simplex_project(mixv);
  return std::abs(rule.accept(mix) - (gamma * rule.accept(y) + (1 - gamma) * rule.accept(y2)));
}

std::vector<StochasticVector> simplex_grid(int k, int m) {
  std::vector<StochasticVector> out;
  std::vector<int> comp(k, 0);
  // enumerate compositions of m into k nonnegative parts, lexicographically
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == k - 1) {
      comp[pos] = left;
      std::vector<double> p(k);
      for (int i = 0; i < k; ++i) p[i] = static_cast<double>(comp[i]) / m;
      out.emplace_back(std::move(p));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      comp[pos] = c;
      rec(pos + 1, left - c);
    }
  };
  rec(0, m);
  return out;
}

namespace {

std::vector<StochasticVector> probe_points(int k, int m, uint64_t seed) {
  std::vector<StochasticVector> pts;
  if (k <= 4) {
    pts = simplex_grid(k, m);
  } else {
    for (int t = 0; t < k; ++t) pts.push_back(unit_vector(t, k));
    RandomStream rng(seed, 0xAF1);
    int want = 2 * 10 * m * m;  // 10*m^2 random pairs = 2x that many points
    for (int i = 0; i < want; ++i) {
      std::vector<double> v(k);
      for (int t = 0; t < k; ++t) v[t] = rng.next_double();
      double s = 0;
      for (double x : v) s += x;
      for (double& x : v) x /= s;
      pts.push_back(simplex_project(v));
    }
  }
  return pts;
}

std::vector<double> gamma_grid(int m) {
  std::vector<double> gs;
  for (int i = 1; i < m; ++i) gs.push_back(static_cast<double>(i) / m);
  if (std::find(gs.begin(), gs.end(), 0.5) == gs.end()) gs.push_back(0.5);
  std::sort(gs.begin(), gs.end());
  return gs;
}

double linf(const StochasticVector& a, const StochasticVector& b) {
  double d = 0;
  for (int t = 0; t < a.k(); ++t) d = std::max(d, std::abs(a[t] - b[t]));
  return d;
}

StochasticVector blend(const StochasticVector& a, const StochasticVector& b, double gamma) {
  std::vector<double> v(a.k());
  for (int t = 0; t < a.k(); ++t) v[t] = gamma * a[t] + (1 - gamma) * b[t];
  return simplex_project(v);
}

}  // namespace

AffinenessCertificate affineness_distance(const DecisionRule& rule, int m, uint64_t seed) {
  if (m < 2) throw std::invalid_argument("affineness_distance: m >= 2");
  const int k = rule.k;
  std::vector<StochasticVector> pts = probe_points(k, m, seed);
  std::vector<double> gs = gamma_grid(m);
  const size_t np = pts.size();
  const size_t npairs = np * (np - 1) / 2;

  std::vector<double> best_v(npairs, 0.0);
  std::vector<double> best_g(npairs, 0.5);
  std::vector<double> fv(np);
  for (size_t i = 0; i < np; ++i) fv[i] = rule.accept(pts[i]);

#pragma omp parallel for schedule(dynamic, 64)
  for (long long pi = 0; pi < static_cast<long long>(npairs); ++pi) {
    // unrank the pair index (i<j)
    size_t i = 0, rem = static_cast<size_t>(pi);
    while (rem >= np - 1 - i) {
      rem -= np - 1 - i;
      ++i;
    }
    size_t j = i + 1 + rem;
    double bv = 0, bg = 0.5;
    for (double gmm : gs) {
      double v = std::abs(rule.accept(blend(pts[i], pts[j], gmm)) -
                          (gmm * fv[i] + (1 - gmm) * fv[j]));
      if (v > bv) {
        bv = v;
        bg = gmm;
      }
    }
    best_v[pi] = bv;
    best_g[pi] = bg;
  }

  AffinenessCertificate cert;
  cert.grid_m = m;
  cert.epsilon = 0;
  long long bestpi = -1;
  for (size_t pi = 0; pi < npairs; ++pi)
    if (best_v[pi] > cert.epsilon) {
      cert.epsilon = best_v[pi];
      bestpi = static_cast<long long>(pi);
    }
  if (bestpi >= 0) {
    size_t i = 0, rem = static_cast<size_t>(bestpi);
    while (rem >= np - 1 - i) {
      rem -= np - 1 - i;
      ++i;
    }
    size_t j = i + 1 + rem;
    cert.y = pts[i];
    cert.y2 = pts[j];
    cert.gamma = best_g[bestpi];
  } else {
    cert.y = pts.front();
    cert.y2 = pts.back();
    cert.gamma = 0.5;
  }
  return cert;
}

LipschitzEstimate lipschitz_estimate(const DecisionRule& rule, int m, uint64_t seed) {
  if (m < 2) throw std::invalid_argument("lipschitz_estimate: m >= 2");
  std::vector<StochasticVector> pts = probe_points(rule.k, m, seed);
  const size_t np = pts.size();
  std::vector<double> fv(np);
  for (size_t i = 0; i < np; ++i) fv[i] = rule.accept(pts[i]);

  LipschitzEstimate est;
  size_t wi = 0, wj = 1;
  for (size_t i = 0; i < np; ++i)
    for (size_t j = i + 1; j < np; ++j) {
      double d = linf(pts[i], pts[j]);
      if (d < 1e-12) continue;
      double r = std::abs(fv[i] - fv[j]) / d;
      if (r > est.bound) {
        est.bound = r;
        wi = i;
        wj = j;
      }
    }
  est.y = pts[wi];
  est.y2 = pts[wj];

  // Bisect toward the steepest pair: if a jump in accept() survives down to
  // a vanishing separation, no finite constant can be certified.
  StochasticVector a = pts[wi], b = pts[wj];
  double fa = fv[wi], fb = fv[wj];
  for (int iter = 0; iter < 60 && linf(a, b) > 1e-9; ++iter) {
    StochasticVector mid = blend(a, b, 0.5);
    double fm = rule.accept(mid);
    if (std::abs(fa - fm) >= std::abs(fm - fb)) {
      b = mid;
      fb = fm;
    } else {
      a = mid;
      fa = fm;
    }
    double d = linf(a, b);
    if (d > 1e-12) est.bound = std::max(est.bound, std::abs(fa - fb) / d);
  }
  if (std::abs(fa - fb) > 1e-6) est.finite = false;
  return est;
}

Nature random_instantiation(const Predictor& pred, const RandomStream& rng) {
  std::vector<StochasticVector> rows;
  rows.reserve(pred.size());
  for (int x = 0; x < pred.size(); ++x) {
    RandomStream sub = rng.substream(static_cast<uint64_t>(x));
    rows.push_back(unit_vector(sample_type(pred(x), sub), pred.k()));
  }
  return Nature(Predictor(std::move(rows)));
}

ActionFunction compose(const DecisionRule& rule, const Predictor& pred) {
  std::vector<double> a(pred.size());
  for (int x = 0; x < pred.size(); ++x) a[x] = rule.accept(pred(x));
  return ActionFunction(std::move(a));
}

}  // namespace calibra
