#pragma once
// Domain types shared by every module: populations, stochastic vectors,
// natures/predictors, groups, discretization grids, losses, and the
// deterministic counter-based random stream.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace calibra {

inline constexpr double kSimplexTol = 1e-9;

// Counter-based deterministic generator. A draw is a pure function of
// (seed, stream, counter), so substreams are order-independent and
// parallel trials can own disjoint streams.
struct RandomStream {
  uint64_t seed = 0;
  uint64_t stream = 0;
  uint64_t counter = 0;

  RandomStream() = default;
  RandomStream(uint64_t seed_, uint64_t stream_ = 0) : seed(seed_), stream(stream_) {}

  static uint64_t mix(uint64_t z);
  static uint64_t at(uint64_t seed, uint64_t stream, uint64_t counter);

  uint64_t next_u64() { return at(seed, stream, counter++); }
  double next_double();  // uniform in [0,1)
  RandomStream substream(uint64_t id) const;
};

struct StochasticVector {
  std::vector<double> p;

  StochasticVector() = default;
  explicit StochasticVector(std::vector<double> entries);

  int k() const { return static_cast<int>(p.size()); }
  double operator[](int t) const { return p[t]; }
  bool is_point_mass() const;
  int point_mass_type() const;  // -1 if none
};

StochasticVector unit_vector(int t, int k);

// Euclidean projection onto the k-simplex (sorting-based); idempotent on
// valid stochastic vectors.
StochasticVector simplex_project(const std::vector<double>& v);

int sample_type(const StochasticVector& y, RandomStream& rng);

struct Population {
  std::vector<double> weights;

  Population() = default;
  explicit Population(std::vector<double> w);
  static Population uniform(int n);

  int size() const { return static_cast<int>(weights.size()); }
  double weight(int x) const { return weights[x]; }
};

struct TypeSpace {
  int k = 2;
  bool ordered = false;                        // rank semantics, rank 1 best
  std::optional<std::vector<double>> values;   // numeric type values in [0,1]

  TypeSpace() = default;
  TypeSpace(int k_, bool ordered_ = false,
            std::optional<std::vector<double>> values_ = std::nullopt);
};

struct Predictor {
  std::vector<StochasticVector> rows;

  Predictor() = default;
  Predictor(int n, const StochasticVector& fill) : rows(n, fill) {}
  explicit Predictor(std::vector<StochasticVector> rows_);

  int size() const { return static_cast<int>(rows.size()); }
  int k() const { return rows.empty() ? 0 : rows.front().k(); }
  const StochasticVector& operator()(int x) const { return rows[x]; }
};

struct Nature {
  Predictor assignment;
  bool deterministic = false;

  Nature() = default;
  explicit Nature(Predictor a);  // derives the deterministic flag

  int size() const { return assignment.size(); }
  int k() const { return assignment.k(); }
  const StochasticVector& operator()(int x) const { return assignment(x); }
};

struct Group {
  std::string id;
  std::vector<uint32_t> members;  // sorted, unique

  Group() = default;
  Group(std::string id_, std::vector<uint32_t> members_);
};

struct GroupCollection {
  std::vector<Group> groups;

  GroupCollection() = default;
  explicit GroupCollection(std::vector<Group> g);
  void validate_against(const Population& pop) const;
  int size() const { return static_cast<int>(groups.size()); }
  const Group& operator[](int i) const { return groups[i]; }
};

// The grid Lambda[0,1] = {lambda/2, 3*lambda/2, ..., 1-lambda/2} with
// half-open covering intervals [v-lambda/2, v+lambda/2), last one closed.
struct Discretization {
  double lambda;
  int bins;

  explicit Discretization(double lambda_);
  double center(int i) const { return (i + 0.5) * lambda; }
  double lower(int i) const { return i * lambda; }
  double upper(int i) const { return (i + 1) * lambda; }
  bool contains(int i, double v) const;
  int bin_of(double v) const;
};

std::vector<double> discretize(const StochasticVector& y, const Discretization& d);
std::vector<int> discretize_bins(const StochasticVector& y, const Discretization& d);

struct LossCertificate {
  double alpha;    // max |l(t,1)-l(t,0)| over types
  int t_reject;    // witness with l(t,1)-l(t,0) > 0 (rejecting better)
  int t_accept;    // witness with l(t,1)-l(t,0) < 0 (accepting better)
};

struct LossFunction {
  // table[t] = {l(t,0), l(t,1)}, entries in [0,1]
  std::vector<std::array<double, 2>> table;
  std::optional<LossCertificate> cert;

  LossFunction() = default;
  explicit LossFunction(std::vector<std::array<double, 2>> table_);

  int k() const { return static_cast<int>(table.size()); }
  double operator()(int t, int a) const { return table[t][a]; }
  double gap(int t) const { return table[t][1] - table[t][0]; }

  // Attaches the nontriviality certificate if the table admits one
  // (a strictly reject-better type and a strictly accept-better type).
  void derive_certificate();
};

}  // namespace calibra
