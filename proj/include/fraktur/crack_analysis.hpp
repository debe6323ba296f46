#pragma once

#include <vector>

#include "fraktur/fem_assembly.hpp"

namespace fraktur {

/// Shortest-path tree over the mesh edges restricted to nodes with alpha >= threshold.
struct CrackPath {
  int root = -1;            ///< mesh node closest to the notch tip
  int tip = -1;             ///< reachable node farthest from the root along edges
  double length = 0.0;      ///< path length from root to tip
  std::vector<Vec2> ridge;  ///< polyline from the notch tip to the crack tip
};

/// The root node is always traversable; every other node needs alpha >= threshold.
CrackPath trace_crack(const TriMesh& mesh, const Vector& alpha, const Vec2& notch_tip, double threshold = 0.9);

/// Coordinates of the crack tip (the notch tip itself when nothing has cracked).
Vec2 crack_tip(const TriMesh& mesh, const Vector& alpha, const Vec2& notch_tip, double threshold = 0.9);

/// Principal direction of the nodes with alpha >= threshold inside the disk,
/// in degrees from +x, within (-90, 90]. Throws DomainError with fewer than two nodes.
double crack_angle_degrees(const TriMesh& mesh, const Vector& alpha, const Vec2& center, double radius,
                           double threshold = 0.9);

/// Distance between two line directions in degrees, in [0, 90].
double axial_angle_difference(double a_deg, double b_deg);

}  // namespace fraktur
