#pragma once

#include <cmath>

namespace cw {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
};

inline constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// Receiver of the separated source-receiver experiments. Fixed throughout.
inline constexpr Vec3 kFocus{1.0, 0.0, 0.0};

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace cw
