#include "run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "conewave/error.hpp"

namespace cw::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end)
    throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
  return out;
}

std::vector<std::string> split(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

RunConfig::RunConfig(std::map<std::string, std::string> defaults) : values_(std::move(defaults)) {}

void RunConfig::set(const std::string& key, const std::string& value, const std::string& origin) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(origin + ": unknown key '" + key + "'");
  it->second = value;
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = path + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where);
  }
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override '" + assignment + "': expected key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), "override");
}

const std::string& RunConfig::text(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("internal: undeclared config key '" + key + "'");
  return it->second;
}

double RunConfig::number(const std::string& key) const { return parse_number(key, text(key)); }

int RunConfig::integer(const std::string& key) const {
  const double v = number(key);
  if (v != static_cast<int>(v)) throw ConfigError("config key '" + key + "': expected an integer");
  return static_cast<int>(v);
}

bool RunConfig::boolean(const std::string& key) const {
  const std::string& v = text(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + v + "'");
}

Vec3 RunConfig::vec3(const std::string& key) const {
  const auto v = numbers(key);
  if (v.size() != 3) throw ConfigError("config key '" + key + "': expected three comma-separated numbers");
  return {v[0], v[1], v[2]};
}

std::vector<double> RunConfig::numbers(const std::string& key) const {
  std::vector<double> out;
  for (const auto& w : split(text(key))) out.push_back(parse_number(key, w));
  return out;
}

std::vector<std::string> RunConfig::words(const std::string& key) const { return split(text(key)); }

nlohmann::json RunConfig::resolved() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

}  // namespace cw::cli
