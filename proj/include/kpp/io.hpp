#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kpp/env_profile.hpp"
#include "kpp/hj_junction_solver.hpp"
#include "kpp/kpp_simulator.hpp"

namespace kpp::io {

using nlohmann::json;

/// Parse failures raise Error(InvalidProfile) for profile blocks and
/// Error(InvalidConfig) elsewhere.
json read_json_file(const std::filesystem::path& path);

EnvironmentProfile profile_from_json(const json& j);
json profile_to_json(const EnvironmentProfile& p);

/// {"junctions": [...], "rates": [...], "lambda1": [...] or "A": [...], "s_max": v}
JunctionProblem problem_from_json(const json& j);

/// Single shift: {"profile": {...}, "c1": v}; several: {"shifts": [{"c": v, "profile": {...}}, ...]}.
/// Optional: dx, dt, t_end, x_min, x_max, scheme, precision, backend, u0, sample_dt, levels,
/// snapshot_times, rannacher_steps.
SimConfig sim_config_from_json(const json& j);

std::uint64_t fnv1a(std::string_view text);
std::string hash_hex(std::uint64_t h);

/// Shortest round-trippable-enough fixed formatting used in every CSV.
std::string fmt(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells);
  std::string render(std::string_view config_hash) const;
  std::size_t rows() const noexcept { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes to a sibling temporary file and renames it over the target.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

void write_csv(const std::filesystem::path& path, const CsvTable& table, std::string_view config_hash);

}  // namespace kpp::io
