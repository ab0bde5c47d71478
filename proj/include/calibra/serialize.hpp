#pragma once
// Versioned JSON round-trips for the core types. Probabilities travel as
// decimal strings (shortest round-trip form) so files never drift when
// re-serialized. CSV export for predictor tables and audit reports.

#include <string>

#include "calibra/core.hpp"
#include "json.hpp"

namespace calibra {

// round-trip-exact decimal string for a double
std::string dec(double v);
// fixed 12-significant-digit form used by canonical reports
std::string fmt12(double v);
double parse_dec(const std::string& s);

nlohmann::json to_json(const Population& pop);
nlohmann::json to_json(const Predictor& pred);
nlohmann::json to_json(const Nature& nat);
nlohmann::json to_json(const GroupCollection& groups);
nlohmann::json to_json(const LossFunction& loss);
nlohmann::json to_json(const TypeSpace& ts);

Population population_from_json(const nlohmann::json& j);
Predictor predictor_from_json(const nlohmann::json& j);
Nature nature_from_json(const nlohmann::json& j);
GroupCollection groups_from_json(const nlohmann::json& j);
LossFunction loss_from_json(const nlohmann::json& j);
TypeSpace typespace_from_json(const nlohmann::json& j);

std::string predictor_csv(const Predictor& pred);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace calibra
