#pragma once

// Shared scalar types, tolerances and error reporting for the resist toolkit.
// Everything downstream works in double precision on Eigen dense types.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace resist {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

// Numeric knobs. Distance tolerances are quoted at unit diameter and get
// scaled by the instance diameter where they are applied; angles are absolute.
struct Tolerances {
    double plane = 1e-9;         // coplanarity / on-boundary slack, unit diameter
    double strict_off = 1e-10;   // strict interior / clearance margin, unit diameter
    double normal_angle = 1e-9;  // atom merge tolerance on the Gauss sphere, radians
    double sing_angle = 0.15;    // normal-cone diameter above which a point is singular, radians
    double crease_angle = 0.2;   // gradient-jump angle marking a crease edge, radians
};

enum class ErrorKind {
    DegenerateInput,
    Unbounded,
    Empty,
    NotOutside,
    ApexInside,
    NotRegularVertex,
    NoValidPoint,
    ObstacleHit,
    FamilyInvariantViolated,
    CreaseDetected,
    TooCloseToBound,
    InvalidProfile,
    InvalidField,
    InvalidArgument,
    IoError,
    ConfigError,
};

const char* to_string(ErrorKind kind);

// Single exception type; `kind` lets callers branch without string matching.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

// Angle between two nonzero vectors, robust near 0 and pi.
inline double angle_between(const Vec3& a, const Vec3& b) {
    return 2.0 * std::atan2((a.normalized() - b.normalized()).norm(),
                            (a.normalized() + b.normalized()).norm());
}

// FNV-1a, used for file manifests and mesh topology fingerprints.
inline std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace resist
