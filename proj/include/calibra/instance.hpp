#pragma once
// Fixture and random-instance construction shared by the CLI generate
// command, the unit tests and the acceptance batteries.

#include "calibra/core.hpp"

namespace calibra {

struct Instance {
  Population pop;
  Nature nature;
  GroupCollection groups;
  TypeSpace ts;
};

// uniform on {0,1,2,3}, k=2, nature {0,1}->e0 and {2,3}->e1,
// groups: all, lo={0,1}, hi={2,3}
Instance pop4_instance();

Predictor half_predictor(int n);   // every element (1/2, 1/2)
Predictor swap_predictor();        // {0,1}->e1, {2,3}->e0 on the pop4 domain

struct RandomInstanceSpec {
  int n = 64;
  int k = 2;
  int n_groups = 4;          // in addition to the full domain
  bool deterministic_nature = false;
  bool ordered = false;
  bool uniform_weights = true;
  uint64_t seed = 1;
};

Instance random_instance(const RandomInstanceSpec& spec);

StochasticVector random_simplex_point(int k, RandomStream& rng);
LossFunction random_nontrivial_loss(int k, RandomStream& rng);

}  // namespace calibra
