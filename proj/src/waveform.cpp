#include "conewave/waveform.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "conewave/error.hpp"

namespace cw {

double ReceiverWaveform::at(double t) const {
  if (values.empty() || t < t0) return 0.0;
  const double pos = (t - t0) / dt;
  const double last = static_cast<double>(values.size() - 1);
  if (pos > last + 1e-9) throw DomainError("waveform sampled past its end time");
  if (pos >= last) return values.back();
  const auto k = static_cast<std::size_t>(pos);
  const double f = pos - static_cast<double>(k);
  return (1.0 - f) * values[k] + f * values[k + 1];
}

double ReceiverWaveform::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

namespace {
std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}
std::string fmt(const Vec3& v) { return fmt(v.x) + " " + fmt(v.y) + " " + fmt(v.z); }

Vec3 parse_vec(const std::string& s) {
  std::istringstream is(s);
  Vec3 v;
  if (!(is >> v.x >> v.y >> v.z)) throw ConfigError("waveform CSV: bad point '" + s + "'");
  return v;
}
}  // namespace

void write_waveform_csv(std::ostream& out, const ReceiverWaveform& w) {
  out << "# solver = " << w.solver << '\n'
      << "# source = " << fmt(w.source) << '\n'
      << "# receiver = " << fmt(w.receiver) << '\n'
      << "# t0 = " << fmt(w.t0) << '\n'
      << "# dt = " << fmt(w.dt) << '\n'
      << "# singular_arrival = " << fmt(w.singular.arrival) << '\n'
      << "# singular_attenuation = " << fmt(w.singular.attenuation) << '\n';
  for (const auto& [k, v] : w.params) out << "# param." << k << " = " << v << '\n';
  out << "t,value\n";
  for (std::size_t k = 0; k < w.values.size(); ++k)
    out << fmt(w.time(k)) << ',' << fmt(w.values[k]) << '\n';
}

ReceiverWaveform read_waveform_csv(std::istream& in) {
  ReceiverWaveform w;
  std::string line;
  bool header = false;
  std::vector<double> ts;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(' ');
        const auto e = s.find_last_not_of(' ');
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      const std::string key = trim(line.substr(1, eq - 1)), val = trim(line.substr(eq + 1));
      if (key == "solver") w.solver = val;
      else if (key == "source") w.source = parse_vec(val);
      else if (key == "receiver") w.receiver = parse_vec(val);
      else if (key == "t0") w.t0 = std::stod(val);
      else if (key == "dt") w.dt = std::stod(val);
      else if (key == "singular_arrival") w.singular.arrival = std::stod(val);
      else if (key == "singular_attenuation") w.singular.attenuation = std::stod(val);
      else if (key.rfind("param.", 0) == 0) w.params[key.substr(6)] = val;
      continue;
    }
    if (!header) {
      if (line != "t,value") throw ConfigError("waveform CSV: expected 't,value' header");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("waveform CSV: malformed row");
    ts.push_back(std::stod(line.substr(0, comma)));
    w.values.push_back(std::stod(line.substr(comma + 1)));
  }
  if (!header) throw ConfigError("waveform CSV: no data header");
  if (ts.size() >= 2 && w.dt == 0.0) w.dt = ts[1] - ts[0];
  if (!ts.empty()) w.t0 = ts.front();
  return w;
}

ReceiverWaveform load_waveform_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open waveform file '" + path + "'");
  return read_waveform_csv(in);
}

double sup_difference(const ReceiverWaveform& a, const ReceiverWaveform& b, double t_from) {
  double m = 0.0;
  const double t_hi = std::min(a.t_end(), b.t_end());
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    const double t = a.time(k);
    if (t < t_from || t > t_hi + 1e-12) continue;
    m = std::max(m, std::abs(a.values[k] - b.at(std::min(t, b.t_end()))));
  }
  return m;
}

}  // namespace cw
