#include "calibra/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace calibra {

std::string dec(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  // normalize the sign of zero so reports never differ on -0
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

double parse_dec(const std::string& s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("bad decimal string: " + s);
  return v;
}

static nlohmann::json vec_to_json(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(dec(x));
  return a;
}

static std::vector<double> vec_from_json(const nlohmann::json& a) {
  std::vector<double> v;
  for (const auto& x : a) v.push_back(parse_dec(x.get<std::string>()));
  return v;
}

static void expect_schema(const nlohmann::json& j, const std::string& name) {
  if (!j.contains("schema") || j.at("schema").get<std::string>() != name)
    throw std::invalid_argument("expected schema " + name);
}

nlohmann::json to_json(const Population& pop) {
  return {{"schema", "calibra/population/v1"},
          {"size", pop.size()},
          {"weights", vec_to_json(pop.weights)}};
}

Population population_from_json(const nlohmann::json& j) {
  expect_schema(j, "calibra/population/v1");
  return Population(vec_from_json(j.at("weights")));
}

nlohmann::json to_json(const Predictor& pred) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : pred.rows) rows.push_back(vec_to_json(r.p));
  return {{"schema", "calibra/predictor/v1"}, {"k", pred.k()}, {"rows", rows}};
}

Predictor predictor_from_json(const nlohmann::json& j) {
  expect_schema(j, "calibra/predictor/v1");
  std::vector<StochasticVector> rows;
  for (const auto& r : j.at("rows")) rows.emplace_back(vec_from_json(r));
  return Predictor(std::move(rows));
}

nlohmann::json to_json(const Nature& nat) {
  nlohmann::json j = to_json(nat.assignment);
  j["schema"] = "calibra/nature/v1";
  j["deterministic"] = nat.deterministic;
  return j;
}

Nature nature_from_json(const nlohmann::json& j) {
  expect_schema(j, "calibra/nature/v1");
  std::vector<StochasticVector> rows;
  for (const auto& r : j.at("rows")) rows.emplace_back(vec_from_json(r));
  Nature n{Predictor(std::move(rows))};
  if (j.contains("deterministic") && j.at("deterministic").get<bool>() != n.deterministic)
    throw std::invalid_argument("nature: deterministic flag disagrees with rows");
  return n;
}

nlohmann::json to_json(const GroupCollection& groups) {
  nlohmann::json gs = nlohmann::json::array();
  for (const auto& g : groups.groups) gs.push_back({{"id", g.id}, {"members", g.members}});
  return {{"schema", "calibra/groups/v1"}, {"groups", gs}};
}

GroupCollection groups_from_json(const nlohmann::json& j) {
  expect_schema(j, "calibra/groups/v1");
  std::vector<Group> gs;
  for (const auto& g : j.at("groups"))
    gs.emplace_back(g.at("id").get<std::string>(), g.at("members").get<std::vector<uint32_t>>());
  return GroupCollection(std::move(gs));
}

nlohmann::json to_json(const LossFunction& loss) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : loss.table) rows.push_back({dec(r[0]), dec(r[1])});
  nlohmann::json j = {{"schema", "calibra/loss/v1"}, {"k", loss.k()}, {"table", rows}};
  if (loss.cert)
    j["certificate"] = {{"alpha", dec(loss.cert->alpha)},
                        {"t_reject", loss.cert->t_reject},
                        {"t_accept", loss.cert->t_accept}};
  return j;
}

LossFunction loss_from_json(const nlohmann::json& j) {
  expect_schema(j, "calibra/loss/v1");
  std::vector<std::array<double, 2>> rows;
  for (const auto& r : j.at("table"))
    rows.push_back({parse_dec(r[0].get<std::string>()), parse_dec(r[1].get<std::string>())});
  LossFunction loss(std::move(rows));
  if (j.contains("certificate")) loss.derive_certificate();
  return loss;
}

nlohmann::json to_json(const TypeSpace& ts) {
  nlohmann::json j = {{"schema", "calibra/typespace/v1"}, {"k", ts.k}, {"ordered", ts.ordered}};
  if (ts.values) j["values"] = vec_to_json(*ts.values);
  return j;
}

TypeSpace typespace_from_json(const nlohmann::json& j) {
  expect_schema(j, "calibra/typespace/v1");
  std::optional<std::vector<double>> values;
  if (j.contains("values")) values = vec_from_json(j.at("values"));
  return TypeSpace(j.at("k").get<int>(), j.value("ordered", false), std::move(values));
}

std::string predictor_csv(const Predictor& pred) {
  std::ostringstream out;
  out << "element";
  for (int t = 0; t < pred.k(); ++t) out << ",p" << t;
  out << "\n";
  for (int x = 0; x < pred.size(); ++x) {
    out << x;
    for (int t = 0; t < pred.k(); ++t) out << "," << fmt12(pred(x)[t]);
    out << "\n";
  }
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace calibra
