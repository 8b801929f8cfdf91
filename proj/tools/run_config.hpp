#pragma once

// Plain-text run configuration: one "key = value" per line, '#' starts a
// comment. Each subcommand declares its keys with defaults; anything else is
// rejected. Later sources override earlier ones: defaults, file, flags.

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "conewave/vec3.hpp"

namespace cw::cli {

class RunConfig {
 public:
  explicit RunConfig(std::map<std::string, std::string> defaults);

  void load_file(const std::string& path);
  /// "key=value" from the command line.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value, const std::string& origin);

  const std::string& text(const std::string& key) const;
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  bool boolean(const std::string& key) const;
  Vec3 vec3(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> words(const std::string& key) const;

  /// Fully resolved key/value map, for the manifest.
  nlohmann::json resolved() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace cw::cli
