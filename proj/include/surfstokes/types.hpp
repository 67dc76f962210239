#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace surfstokes {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
/// Barycentric coordinates on a tetrahedron (sum to one).
using Bary = Eigen::Vector4d;

/// Thrown for every recoverable failure in the pipeline; the message names
/// the operation and the offending entity.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Formulation { consistent, inconsistent };

inline const char* to_string(Formulation f) {
  return f == Formulation::consistent ? "consistent" : "inconsistent";
}

}  // namespace surfstokes
