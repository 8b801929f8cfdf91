#pragma once

// JSON reports, CSV tables and the run manifest.
//
// The manifest hash is the SHA-256 of the canonical (sorted-key) JSON dump of
// the resolved configuration (output_dir excluded) and the tool version; every artifact written
// through ArtifactWriter carries it ("# manifest_hash = ..." in CSV, a
// "manifest_hash" field in JSON), and manifest.json lists the SHA-256 of each
// file. Nothing time- or host-dependent enters any output.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "conewave/identity.hpp"
#include "conewave/inversion.hpp"
#include "conewave/waveform.hpp"

namespace cw::report {

inline constexpr const char* kVersion = "1.0.0";

using json = nlohmann::json;

std::string sha256_hex(std::string_view bytes);

/// Shortest decimal that round-trips the double ('.' decimal point).
std::string format_double(double v);

json to_json(const identity::IdentityReport& r);
json to_json(const identity::ITermBreakdown& b);
/// Metadata and sup-norm only; samples go to CSV.
json to_json(const ReceiverWaveform& w);
json to_json(const inversion::ReconstructionResult& r);
json to_json(const inversion::ProbeReport& r);

/// Columns: <grid_name>,lhs,rhs,abs_residual, then one column per series.
void write_identity_csv(std::ostream& out, const identity::IdentityReport& r);
/// Columns: coordinate,value,residual,iterations.
void write_reconstruction_csv(std::ostream& out, const inversion::ReconstructionResult& r);

struct ManifestEntry {
  std::string name;
  std::string sha256;
};

class ArtifactWriter {
 public:
  /// Creates dir if needed.
  ArtifactWriter(std::filesystem::path dir, json resolved_config);

  const std::string& manifest_hash() const { return hash_; }
  const std::filesystem::path& dir() const { return dir_; }

  /// body: CSV text (header row first); a hash comment line is prepended.
  void write_csv(const std::string& name, const std::string& body);
  void write_json(const std::string& name, json j);
  /// Writes manifest.json; call once after all artifacts.
  void finish(const json& summary = json::object());

  const std::vector<ManifestEntry>& entries() const { return entries_; }

 private:
  std::filesystem::path dir_;
  json config_;
  std::string hash_;
  std::vector<ManifestEntry> entries_;
  void write_file(const std::string& name, const std::string& content);
};

}  // namespace cw::report
