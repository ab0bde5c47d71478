// Wall-time comparison of the parallel auditors against the serial
// reference implementations on a single large random instance.

#include <chrono>
#include <cstdio>

#include "calibra/instance.hpp"
#include "calibra/metrics.hpp"
#include "calibra/reference.hpp"
#include "calibra/rules.hpp"

using namespace calibra;
using clk = std::chrono::steady_clock;

static double ms_since(clk::time_point t0) {
  return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

template <class F>
static double timed(const char* name, F&& f) {
  auto t0 = clk::now();
  double v = f();
  double ms = ms_since(t0);
  std::printf("%-28s %10.2f ms   max_gap=%.6g\n", name, ms, v);
  return ms;
}

int main() {
  RandomInstanceSpec spec;
  spec.n = 1 << 13;
  spec.k = 4;
  spec.n_groups = 16;
  spec.uniform_weights = false;
  spec.seed = 7;
  Instance inst = random_instance(spec);
  Predictor pred = half_predictor(spec.n);
  {
    // perturb so audits have nontrivial work
    RandomStream rng(11);
    std::vector<StochasticVector> rows;
    rows.reserve(spec.n);
    for (int x = 0; x < spec.n; ++x) rows.push_back(random_simplex_point(spec.k, rng));
    pred = Predictor(std::move(rows));
  }
  Discretization d(0.125);

  std::printf("instance: n=%d k=%d groups=%d\n\n", spec.n, spec.k, inst.groups.size());

  double p, s;
  p = timed("ma_cw (parallel)", [&] {
    return ma_error(inst.pop, inst.nature, pred, inst.groups, MaMode::CoordinateWise, inst.ts)
        .max_gap;
  });
  s = timed("ma_cw (reference)", [&] {
    return reference::ma_cw_error(inst.pop, inst.nature, pred, inst.groups);
  });
  std::printf("  speedup %.2fx\n\n", s / p);

  p = timed("mc_cw (parallel)", [&] {
    return mc_cw_error(inst.pop, inst.nature, pred, inst.groups, d).max_gap;
  });
  s = timed("mc_cw (reference)", [&] {
    return reference::mc_cw_error(inst.pop, inst.nature, pred, inst.groups, d.lambda);
  });
  std::printf("  speedup %.2fx\n\n", s / p);

  // the reference mc_full is quadratic, so compare on a smaller instance
  RandomInstanceSpec small_spec = spec;
  small_spec.n = 1 << 10;
  Instance small = random_instance(small_spec);
  Predictor small_pred = [&] {
    RandomStream rng(13);
    std::vector<StochasticVector> rows;
    for (int x = 0; x < small_spec.n; ++x) rows.push_back(random_simplex_point(spec.k, rng));
    return Predictor(std::move(rows));
  }();
  p = timed("mc_full (parallel, n=2^10)", [&] {
    return mc_full_error(small.pop, small.nature, small_pred, small.groups, d).max_gap;
  });
  s = timed("mc_full (reference, n=2^10)", [&] {
    return reference::mc_full_error(small.pop, small.nature, small_pred, small.groups, d.lambda);
  });
  std::printf("  speedup %.2fx\n\n", s / p);

  LossFunction loss({{0.0, 1.0}, {0.3, 0.2}, {0.8, 0.1}, {0.2, 0.9}});
  loss.derive_certificate();
  ActionFunction h = compose(loss_min_rule(loss), pred);
  p = timed("mac (parallel)", [&] {
    return mac_error(inst.pop, inst.nature, h, loss, inst.groups).max_gap;
  });
  s = timed("mac (reference)", [&] {
    return reference::mac_error(inst.pop, inst.nature, h, loss, inst.groups);
  });
  std::printf("  speedup %.2fx\n", s / p);

  return 0;
}
