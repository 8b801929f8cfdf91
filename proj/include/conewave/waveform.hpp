#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "conewave/vec3.hpp"

namespace cw {

/// Distributional front of the receiver signal, kept symbolically:
/// attenuation * delta(t - arrival) / (4 pi arrival). The arrival equals the
/// source-receiver distance; attenuation is R there (1 for the potential case).
struct SingularPart {
  double arrival = 0.0;
  double attenuation = 1.0;
};

/// Smooth part v(receiver, t) on a uniform grid t_k = t0 + k dt.
struct ReceiverWaveform {
  Vec3 source;
  Vec3 receiver;
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> values;
  SingularPart singular;
  std::string solver;
  std::map<std::string, std::string> params;

  double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
  double t_end() const { return values.empty() ? t0 : time(values.size() - 1); }
  /// Linear interpolation; 0 before t0, throws DomainError past t_end().
  double at(double t) const;
  double sup_norm() const;
};

/// CSV with '#'-prefixed "key = value" metadata, a "t,value" header row, LF
/// line endings and 17 significant digits.
void write_waveform_csv(std::ostream& out, const ReceiverWaveform& w);
ReceiverWaveform read_waveform_csv(std::istream& in);
ReceiverWaveform load_waveform_csv(const std::string& path);

/// Sup-norm of (a - b) over the common time range, sampled on a's grid.
double sup_difference(const ReceiverWaveform& a, const ReceiverWaveform& b, double t_from = -1e300);

}  // namespace cw
