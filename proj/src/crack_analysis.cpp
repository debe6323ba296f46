#include "fraktur/crack_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

#include <Eigen/Eigenvalues>

#include "fraktur/error.hpp"

namespace fraktur {

CrackPath trace_crack(const TriMesh& mesh, const Vector& alpha, const Vec2& notch_tip, double threshold) {
  const std::size_t n = mesh.num_vertices();
  if (static_cast<std::size_t>(alpha.size()) != n) throw InvalidArgument("alpha size does not match the mesh");
  CrackPath path;
  if (n == 0) return path;

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (mesh.vertices[i] - notch_tip).norm();
    if (d < best) {
      best = d;
      path.root = static_cast<int>(i);
    }
  }

  std::vector<std::vector<int>> adj(n);
  for (const auto& t : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<int> parent(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[path.root] = 0.0;
  queue.emplace(0.0, path.root);
  path.tip = path.root;
  while (!queue.empty()) {
    const auto [d, i] = queue.top();
    queue.pop();
    if (d > dist[i]) continue;
    if (d > path.length || (d == path.length && i < path.tip)) {
      path.length = d;
      path.tip = i;
    }
    for (int j : adj[i]) {
      if (alpha[j] < threshold) continue;
      const double nd = d + (mesh.vertices[i] - mesh.vertices[j]).norm();
      if (nd < dist[j]) {
        dist[j] = nd;
        parent[j] = i;
        queue.emplace(nd, j);
      }
    }
  }
  for (int i = path.tip; i >= 0; i = parent[i]) path.ridge.push_back(mesh.vertices[i]);
  std::reverse(path.ridge.begin(), path.ridge.end());
  return path;
}

Vec2 crack_tip(const TriMesh& mesh, const Vector& alpha, const Vec2& notch_tip, double threshold) {
  const CrackPath path = trace_crack(mesh, alpha, notch_tip, threshold);
  return path.tip < 0 ? notch_tip : mesh.vertices[path.tip];
}

double crack_angle_degrees(const TriMesh& mesh, const Vector& alpha, const Vec2& center, double radius,
                           double threshold) {
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i)
    if (alpha[static_cast<Eigen::Index>(i)] >= threshold && (mesh.vertices[i] - center).norm() <= radius)
      pts.push_back(mesh.vertices[i]);
  if (pts.size() < 2) throw DomainError("no crack: fewer than two nodes with alpha >= threshold in the window");
  Vec2 mean = Vec2::Zero();
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Mat2 cov = Mat2::Zero();
  for (const auto& p : pts) cov += (p - mean) * (p - mean).transpose();
  Eigen::SelfAdjointEigenSolver<Mat2> eig(cov);
  const Vec2 dir = eig.eigenvectors().col(1);
  double deg = std::atan2(dir.y(), dir.x()) * 180.0 / std::numbers::pi;
  while (deg <= -90.0) deg += 180.0;
  while (deg > 90.0) deg -= 180.0;
  return deg;
}

double axial_angle_difference(double a_deg, double b_deg) {
  double d = std::fmod(std::abs(a_deg - b_deg), 180.0);
  return std::min(d, 180.0 - d);
}

}  // namespace fraktur
