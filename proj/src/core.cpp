#include "calibra/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace calibra {

uint64_t RandomStream::mix(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t RandomStream::at(uint64_t seed, uint64_t stream, uint64_t counter) {
  uint64_t h = mix(seed);
  h = mix(h ^ stream);
  return mix(h ^ counter);
}

double RandomStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

RandomStream RandomStream::substream(uint64_t id) const {
  RandomStream s(seed, mix(stream ^ mix(id)));
  return s;
}

StochasticVector::StochasticVector(std::vector<double> entries) : p(std::move(entries)) {
  if (p.empty()) throw std::invalid_argument("stochastic vector: empty");
  double sum = 0;
  for (double v : p) {
    if (!std::isfinite(v) || v < -kSimplexTol || v > 1 + kSimplexTol)
      throw std::invalid_argument("stochastic vector: entry out of [0,1]");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSimplexTol)
    throw std::invalid_argument("stochastic vector: entries do not sum to 1");
}

bool StochasticVector::is_point_mass() const { return point_mass_type() >= 0; }

int StochasticVector::point_mass_type() const {
  for (int t = 0; t < k(); ++t)
    if (std::abs(p[t] - 1.0) <= kSimplexTol) return t;
  return -1;
}

StochasticVector unit_vector(int t, int k) {
  if (k < 1 || t < 0 || t >= k) throw std::out_of_range("unit_vector: index out of range");
  std::vector<double> p(k, 0.0);
  p[t] = 1.0;
  return StochasticVector(std::move(p));
}

StochasticVector simplex_project(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("simplex_project: empty input");
  for (double x : v)
    if (!std::isfinite(x)) throw std::invalid_argument("simplex_project: non-finite input");
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0, theta = 0;
  int rho = 0;
  double prefix = 0;
  for (size_t j = 0; j < u.size(); ++j) {
    prefix += u[j];
    double cand = (prefix - 1.0) / static_cast<double>(j + 1);
    if (u[j] - cand > 0) {
      rho = static_cast<int>(j + 1);
      css = prefix;
    }
  }
  theta = (css - 1.0) / rho;
  std::vector<double> out(v.size());
  double sum = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    out[i] = std::max(v[i] - theta, 0.0);
    sum += out[i];
  }
  // absorb rounding residue into the largest coordinate
  size_t imax = std::distance(out.begin(), std::max_element(out.begin(), out.end()));
  out[imax] += 1.0 - sum;
  return StochasticVector(std::move(out));
}

int sample_type(const StochasticVector& y, RandomStream& rng) {
  double u = rng.next_double();
  double acc = 0;
  for (int t = 0; t < y.k(); ++t) {
    acc += y[t];
    if (u < acc) return t;
  }
  return y.k() - 1;
}

Population::Population(std::vector<double> w) : weights(std::move(w)) {
  if (weights.empty()) throw std::invalid_argument("population: size must be >= 1");
  double sum = 0;
  for (double x : weights) {
    if (!std::isfinite(x) || x < 0) throw std::invalid_argument("population: negative weight");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSimplexTol)
    throw std::invalid_argument("population: weights must sum to 1");
}

Population Population::uniform(int n) {
  if (n < 1) throw std::invalid_argument("population: size must be >= 1");
  return Population(std::vector<double>(n, 1.0 / n));
}

TypeSpace::TypeSpace(int k_, bool ordered_, std::optional<std::vector<double>> values_)
    : k(k_), ordered(ordered_), values(std::move(values_)) {
  if (k < 2) throw std::invalid_argument("type space: k must be >= 2");
  if (values) {
    if (static_cast<int>(values->size()) != k)
      throw std::invalid_argument("type space: values size mismatch");
    double prev = -1;
    for (double v : *values) {
      if (v < 0 || v > 1 || v <= prev)
        throw std::invalid_argument("type space: values must be strictly increasing in [0,1]");
      prev = v;
    }
  }
}

Predictor::Predictor(std::vector<StochasticVector> rows_) : rows(std::move(rows_)) {
  if (rows.empty()) throw std::invalid_argument("predictor: empty assignment");
  int kk = rows.front().k();
  for (const auto& r : rows)
    if (r.k() != kk) throw std::invalid_argument("predictor: inconsistent dimensions");
}

Nature::Nature(Predictor a) : assignment(std::move(a)) {
  deterministic = true;
  for (const auto& r : assignment.rows)
    if (!r.is_point_mass()) { deterministic = false; break; }
}

Group::Group(std::string id_, std::vector<uint32_t> members_)
    : id(std::move(id_)), members(std::move(members_)) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
}

GroupCollection::GroupCollection(std::vector<Group> g) : groups(std::move(g)) {
  for (size_t i = 0; i < groups.size(); ++i)
    for (size_t j = i + 1; j < groups.size(); ++j)
      if (groups[i].id == groups[j].id)
        throw std::invalid_argument("group collection: duplicate id " + groups[i].id);
}

void GroupCollection::validate_against(const Population& pop) const {
  for (const auto& g : groups)
    for (uint32_t m : g.members)
      if (m >= static_cast<uint32_t>(pop.size()))
        throw std::invalid_argument("group collection: member index out of range in " + g.id);
}

Discretization::Discretization(double lambda_) : lambda(lambda_) {
  if (!(lambda > 0 && lambda < 1)) throw std::invalid_argument("discretization: lambda in (0,1)");
  double inv = 1.0 / lambda;
  bins = static_cast<int>(std::lround(inv));
  if (std::abs(inv - bins) > 1e-9)
    throw std::invalid_argument("discretization: 1/lambda must be an integer");
}

bool Discretization::contains(int i, double v) const {
  if (i < 0 || i >= bins) return false;
  if (i == bins - 1) return v >= lower(i) && v <= 1.0;
  return v >= lower(i) && v < upper(i);
}

int Discretization::bin_of(double v) const {
  if (v < 0 || v > 1) throw std::invalid_argument("discretization: value outside [0,1]");
  int i = std::min(bins - 1, static_cast<int>(std::floor(v / lambda)));
  while (i > 0 && v < lower(i)) --i;
  while (i + 1 < bins && v >= upper(i)) ++i;
  return i;
}

std::vector<double> discretize(const StochasticVector& y, const Discretization& d) {
  std::vector<double> out(y.k());
  for (int t = 0; t < y.k(); ++t) out[t] = d.center(d.bin_of(y[t]));
  return out;
}

std::vector<int> discretize_bins(const StochasticVector& y, const Discretization& d) {
  std::vector<int> out(y.k());
  for (int t = 0; t < y.k(); ++t) out[t] = d.bin_of(y[t]);
  return out;
}

LossFunction::LossFunction(std::vector<std::array<double, 2>> table_) : table(std::move(table_)) {
  if (table.size() < 2) throw std::invalid_argument("loss: k must be >= 2");
  for (const auto& row : table)
    for (double v : row)
      if (!(v >= 0 && v <= 1)) throw std::invalid_argument("loss: entries must lie in [0,1]");
}

void LossFunction::derive_certificate() {
  int tr = -1, ta = -1;
  double best = 0;
  for (int t = 0; t < k(); ++t) {
    double g = gap(t);
    if (g > 0 && (tr < 0 || g > gap(tr))) tr = t;
    if (g < 0 && (ta < 0 || g < gap(ta))) ta = t;
    best = std::max(best, std::abs(g));
  }
  if (tr >= 0 && ta >= 0)
    cert = LossCertificate{best, tr, ta};
  else
    cert = std::nullopt;
}

}  // namespace calibra
