#include "kpp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "kpp/errors.hpp"
#include "kpp/version.hpp"

namespace kpp::io {
namespace {

double number(const json& j, const char* key, ErrorCode code) {
  if (!j.contains(key)) throw Error(code, std::string("missing field '") + key + "'");
  if (!j.at(key).is_number()) throw Error(code, std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw Error(ErrorCode::InvalidConfig, std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::vector<double> numbers(const json& j, const char* key, ErrorCode code) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw Error(code, std::string("field '") + key + "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw Error(code, std::string("field '") + key + "' must hold numbers only");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string text_or(const json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw Error(ErrorCode::InvalidConfig, std::string("field '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
}

EnvironmentProfile profile_from_json(const json& j) {
  constexpr auto bad = ErrorCode::InvalidProfile;
  if (!j.is_object()) throw Error(bad, "profile must be a JSON object");
  if (!j.contains("kind") || !j.at("kind").is_string()) throw Error(bad, "profile needs a string 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return EnvironmentProfile::constant(number(j, "g0", bad));
  if (kind == "piecewise_constant") {
    return EnvironmentProfile::piecewise_constant(numbers(j, "breaks", bad), numbers(j, "values", bad));
  }
  if (kind == "three_patch") {
    return EnvironmentProfile::three_patch(number(j, "r_minus", bad), number(j, "r_mid", bad),
                                           number(j, "r_plus", bad), number(j, "L", bad));
  }
  if (kind == "tanh_ramp") {
    return EnvironmentProfile::tanh_ramp(number(j, "r_minus", bad), number(j, "r_plus", bad),
                                         number(j, "steepness", bad));
  }
  if (kind == "sampled") {
    if (!j.contains("table") || !j.at("table").is_array()) throw Error(bad, "sampled profile needs 'table'");
    std::vector<double> ys, gs;
    for (const auto& row : j.at("table")) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
        throw Error(bad, "sampled table rows must be [position, rate]");
      }
      ys.push_back(row[0].get<double>());
      gs.push_back(row[1].get<double>());
    }
    return EnvironmentProfile::sampled(std::move(ys), std::move(gs), number(j, "r_minus", bad),
                                       number(j, "r_plus", bad));
  }
  throw Error(bad, "unknown profile kind '" + kind + "'");
}

json profile_to_json(const EnvironmentProfile& p) {
  json j;
  j["kind"] = p.kind_name();
  const auto& k = p.kind();
  if (const auto* c = std::get_if<profile::Constant>(&k)) {
    j["g0"] = c->g0;
  } else if (const auto* pc = std::get_if<profile::PiecewiseConstant>(&k)) {
    j["breaks"] = pc->breaks;
    j["values"] = pc->values;
  } else if (const auto* tp = std::get_if<profile::ThreePatch>(&k)) {
    j["r_minus"] = tp->r_minus;
    j["r_mid"] = tp->r_mid;
    j["r_plus"] = tp->r_plus;
    j["L"] = tp->length;
  } else if (const auto* tr = std::get_if<profile::TanhRamp>(&k)) {
    j["r_minus"] = tr->r_minus;
    j["r_plus"] = tr->r_plus;
    j["steepness"] = tr->steepness;
  } else if (const auto* s = std::get_if<profile::Sampled>(&k)) {
    json table = json::array();
    for (std::size_t i = 0; i < s->positions.size(); ++i) table.push_back({s->positions[i], s->rates[i]});
    j["table"] = table;
    j["r_minus"] = s->r_minus;
    j["r_plus"] = s->r_plus;
  }
  return j;
}

JunctionProblem problem_from_json(const json& j) {
  constexpr auto bad = ErrorCode::InvalidConfig;
  if (!j.is_object()) throw Error(bad, "problem must be a JSON object");
  JunctionProblem p;
  p.junctions = numbers(j, "junctions", bad);
  p.rates = numbers(j, "rates", bad);
  if (j.contains("A")) {
    p.flux_limiters = numbers(j, "A", bad);
  } else {
    const auto lam = numbers(j, "lambda1", bad);
    if (lam.size() != p.junctions.size()) throw Error(bad, "one lambda1 per junction required");
    for (std::size_t i = 0; i < lam.size(); ++i) {
      p.flux_limiters.push_back(lam[i] - 0.25 * p.junctions[i] * p.junctions[i]);
    }
  }
  if (p.rates.size() != p.junctions.size() + 1) throw Error(bad, "rates must have one entry more than junctions");
  if (p.flux_limiters.size() != p.junctions.size()) throw Error(bad, "one flux limiter per junction required");
  p.s_max = j.contains("s_max") ? number(j, "s_max", bad) : std::ceil(1.25 * required_s_max(p) + 1.0);
  return p;
}

SimConfig sim_config_from_json(const json& j) {
  constexpr auto bad = ErrorCode::InvalidConfig;
  if (!j.is_object()) throw Error(bad, "simulation config must be a JSON object");
  SimConfig c;
  if (j.contains("shifts")) {
    if (!j.at("shifts").is_array()) throw Error(bad, "'shifts' must be an array");
    for (const auto& s : j.at("shifts")) {
      if (!s.contains("profile")) throw Error(bad, "every shift needs a 'profile'");
      c.shifts.push_back({number(s, "c", bad), profile_from_json(s.at("profile"))});
    }
  } else {
    if (!j.contains("profile")) throw Error(bad, "config needs 'profile' or 'shifts'");
    c.shifts.push_back({number_or(j, "c1", 0.0), profile_from_json(j.at("profile"))});
  }
  c.dx = number_or(j, "dx", c.dx);
  c.dt = number_or(j, "dt", c.dt);
  c.t_end = number_or(j, "t_end", c.t_end);
  c.x_min = number_or(j, "x_min", c.x_min);
  c.x_max = number_or(j, "x_max", c.x_max);
  c.sample_dt = number_or(j, "sample_dt", c.sample_dt);
  c.rannacher_steps = static_cast<int>(number_or(j, "rannacher_steps", c.rannacher_steps));

  const std::string scheme = text_or(j, "scheme", "imex");
  if (scheme == "imex" || scheme == "imex_crank_nicolson") {
    c.scheme = Scheme::ImexCrankNicolson;
  } else if (scheme == "explicit_euler") {
    c.scheme = Scheme::ExplicitEuler;
  } else {
    throw Error(bad, "unknown scheme '" + scheme + "'");
  }
  const std::string precision = text_or(j, "precision", "double");
  if (precision == "double") {
    c.precision = Precision::Double;
  } else if (precision == "extended") {
    c.precision = Precision::Extended;
  } else {
    throw Error(bad, "unknown precision '" + precision + "'");
  }
  const std::string backend = text_or(j, "backend", "openmp");
  if (backend == "openmp") {
    c.backend = Backend::OpenMP;
  } else if (backend == "serial") {
    c.backend = Backend::Serial;
  } else {
    throw Error(bad, "unknown backend '" + backend + "'");
  }
  if (j.contains("u0")) {
    const auto& u = j.at("u0");
    c.u0.center = number_or(u, "center", c.u0.center);
    c.u0.width = number_or(u, "width", c.u0.width);
    c.u0.height = number_or(u, "height", c.u0.height);
  }
  if (j.contains("levels")) c.levels = numbers(j, "levels", bad);
  if (j.contains("snapshot_times")) c.snapshot_times = numbers(j, "snapshot_times", bad);
  validate(c);
  return c;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::logic_error("csv row width does not match header");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::render(std::string_view config_hash) const {
  std::ostringstream os;
  os << "# " << kToolName << ' ' << kVersion << " config=" << config_hash << '\n';
  auto line = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return os.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::InvalidConfig, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::InvalidConfig, "cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table, std::string_view config_hash) {
  write_atomic(path, table.render(config_hash));
}

}  // namespace kpp::io
