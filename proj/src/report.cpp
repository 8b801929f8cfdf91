#include "conewave/report.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "conewave/error.hpp"

namespace cw::report {

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

json to_json(const identity::IdentityReport& r) {
  json j;
  j["name"] = r.name;
  j["grid_name"] = r.grid_name;
  j["grid"] = r.grid;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["abs_residual"] = r.abs_residual;
  j["max_abs_residual"] = r.max_abs_residual;
  j["rel_residual"] = r.rel_residual;
  j["series"] = r.series;
  j["scalars"] = r.scalars;
  j["tolerances"] = r.tolerances;
  j["metadata"] = r.metadata;
  return j;
}

json to_json(const identity::ITermBreakdown& b) {
  return json{{"sigma", b.sigma},
              {"I1", b.I1},
              {"I2", b.I2},
              {"I3", b.I3},
              {"I4", b.I4},
              {"I5", b.I5},
              {"data", b.data},
              {"sum_residual", b.sum_residual},
              {"I1_mollified", b.I1_mollified},
              {"I2_mollified", b.I2_mollified},
              {"mollifier_width", b.mollifier_width},
              {"error_estimates", b.error_estimates}};
}

json to_json(const ReceiverWaveform& w) {
  return json{{"solver", w.solver},
              {"source", {w.source.x, w.source.y, w.source.z}},
              {"receiver", {w.receiver.x, w.receiver.y, w.receiver.z}},
              {"t0", w.t0},
              {"dt", w.dt},
              {"samples", w.values.size()},
              {"t_end", w.t_end()},
              {"sup_norm", w.sup_norm()},
              {"singular", {{"arrival", w.singular.arrival}, {"attenuation", w.singular.attenuation}}},
              {"params", w.params}};
}

json to_json(const inversion::ReconstructionResult& r) {
  return json{{"kind", r.kind},
              {"layers", r.layers},
              {"values", r.values},
              {"residuals", r.residuals},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"valid_from", r.valid_from},
              {"valid_to", r.valid_to}};
}

json to_json(const inversion::ProbeReport& r) {
  return json{{"T", r.T},
              {"data_difference", r.data_difference},
              {"noise_floor", r.noise_floor},
              {"ratio", r.ratio},
              {"differ_inside", r.differ_inside},
              {"distinguished", r.distinguished},
              {"tau", r.tau},
              {"Q", r.Q},
              {"Q_cumulative", r.Q_cumulative}};
}

void write_identity_csv(std::ostream& out, const identity::IdentityReport& r) {
  out << (r.grid_name.empty() ? "x" : r.grid_name) << ",lhs,rhs,abs_residual";
  std::vector<const std::vector<double>*> cols;
  for (const auto& [name, s] : r.series)
    if (s.size() == r.grid.size()) {
      out << ',' << name;
      cols.push_back(&s);
    }
  out << '\n';
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    out << format_double(r.grid[i]) << ',' << format_double(r.lhs[i]) << ','
        << format_double(r.rhs[i]) << ',' << format_double(r.abs_residual[i]);
    for (const auto* c : cols) out << ',' << format_double((*c)[i]);
    out << '\n';
  }
}

void write_reconstruction_csv(std::ostream& out, const inversion::ReconstructionResult& r) {
  out << "coordinate,value,residual,iterations\n";
  for (std::size_t i = 0; i < r.layers.size(); ++i)
    out << format_double(r.layers[i]) << ',' << format_double(r.values[i]) << ','
        << format_double(r.residuals[i]) << ',' << r.iterations[i] << '\n';
}

ArtifactWriter::ArtifactWriter(std::filesystem::path dir, json resolved_config)
    : dir_(std::move(dir)), config_(std::move(resolved_config)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir_.string() + ": " + ec.message());
  // Where the artifacts land does not change what they contain.
  json hashed = config_;
  if (hashed.is_object()) hashed.erase("output_dir");
  hash_ = sha256_hex(json{{"config", hashed}, {"version", kVersion}}.dump());
}

void ArtifactWriter::write_file(const std::string& name, const std::string& content) {
  const auto path = dir_ / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << content;
  if (!f) throw ConfigError("write failed for " + path.string());
  entries_.push_back({name, sha256_hex(content)});
}

void ArtifactWriter::write_csv(const std::string& name, const std::string& body) {
  write_file(name, "# manifest_hash = " + hash_ + "\n" + body);
}

void ArtifactWriter::write_json(const std::string& name, json j) {
  j["manifest_hash"] = hash_;
  write_file(name, j.dump(2) + "\n");
}

void ArtifactWriter::finish(const json& summary) {
  json files = json::array();
  for (const auto& e : entries_) files.push_back({{"name", e.name}, {"sha256", e.sha256}});
  const json m{{"tool", "conewave"},
               {"version", kVersion},
               {"manifest_hash", hash_},
               {"config", config_},
               {"files", files},
               {"summary", summary}};
  const auto path = dir_ / "manifest.json";
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << m.dump(2) << '\n';
}

}  // namespace cw::report
