#include "calibra/instance.hpp"

#include <cmath>
#include <stdexcept>

namespace calibra {

Instance pop4_instance() {
  Instance inst;
  inst.pop = Population::uniform(4);
  inst.ts = TypeSpace(2);
  std::vector<StochasticVector> rows = {unit_vector(0, 2), unit_vector(0, 2), unit_vector(1, 2),
                                        unit_vector(1, 2)};
  inst.nature = Nature(Predictor(std::move(rows)));
  inst.groups = GroupCollection({Group("all", {0, 1, 2, 3}), Group("lo", {0, 1}),
                                 Group("hi", {2, 3})});
  return inst;
}

Predictor half_predictor(int n) {
  return Predictor(n, StochasticVector({0.5, 0.5}));
}

Predictor swap_predictor() {
  std::vector<StochasticVector> rows = {unit_vector(1, 2), unit_vector(1, 2), unit_vector(0, 2),
                                        unit_vector(0, 2)};
  return Predictor(std::move(rows));
}

StochasticVector random_simplex_point(int k, RandomStream& rng) {
  // exponential spacings give a uniform point on the simplex
  std::vector<double> v(k);
  double s = 0;
  for (int t = 0; t < k; ++t) {
    v[t] = -std::log(1.0 - rng.next_double());
    s += v[t];
  }
  for (double& x : v) x /= s;
  return simplex_project(v);
}

LossFunction random_nontrivial_loss(int k, RandomStream& rng) {
  for (int attempt = 0;; ++attempt) {
    std::vector<std::array<double, 2>> table(k);
    for (int t = 0; t < k; ++t) table[t] = {rng.next_double(), rng.next_double()};
    LossFunction loss(std::move(table));
    loss.derive_certificate();
    if (loss.cert && loss.cert->alpha >= 0.05) return loss;
    if (attempt > 1000) throw std::runtime_error("random_nontrivial_loss: no certificate found");
  }
}

Instance random_instance(const RandomInstanceSpec& spec) {
  Instance inst;
  RandomStream wrng = RandomStream(spec.seed, 1);
  if (spec.uniform_weights) {
    inst.pop = Population::uniform(spec.n);
  } else {
    std::vector<double> w(spec.n);
    double s = 0;
    for (int x = 0; x < spec.n; ++x) {
      w[x] = 0.1 + wrng.next_double();
      s += w[x];
    }
    double acc = 0;
    for (int x = 0; x < spec.n; ++x) {
      w[x] /= s;
      acc += w[x];
    }
    w[spec.n - 1] += 1.0 - acc;
    inst.pop = Population(std::move(w));
  }

  inst.ts = TypeSpace(spec.k, spec.ordered);
  RandomStream nrng = RandomStream(spec.seed, 2);
  std::vector<StochasticVector> rows;
  rows.reserve(spec.n);
  for (int x = 0; x < spec.n; ++x) {
    if (spec.deterministic_nature)
      rows.push_back(unit_vector(static_cast<int>(nrng.next_u64() % spec.k), spec.k));
    else
      rows.push_back(random_simplex_point(spec.k, nrng));
  }
  inst.nature = Nature(Predictor(std::move(rows)));

  RandomStream grng = RandomStream(spec.seed, 3);
  std::vector<Group> gs;
  std::vector<uint32_t> all(spec.n);
  for (int x = 0; x < spec.n; ++x) all[x] = static_cast<uint32_t>(x);
  gs.emplace_back("all", std::move(all));
  for (int gi = 1; gi <= spec.n_groups; ++gi) {
    std::vector<uint32_t> members;
    for (int x = 0; x < spec.n; ++x)
      if (grng.next_double() < 0.5) members.push_back(static_cast<uint32_t>(x));
    if (members.empty()) members.push_back(static_cast<uint32_t>(grng.next_u64() % spec.n));
    gs.emplace_back("g" + std::to_string(gi), std::move(members));
  }
  inst.groups = GroupCollection(std::move(gs));
  return inst;
}

}  // namespace calibra
