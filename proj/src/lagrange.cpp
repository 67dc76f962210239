#include "surfstokes/lagrange.hpp"

#include <algorithm>
#include <unordered_map>

namespace surfstokes {

namespace lagrange {

namespace {

constexpr int kMaxDegree = 8;

std::vector<std::array<int, 4>> enumerate(int k) {
  std::vector<std::array<int, 4>> out;
  // Vertices, then the rest in lexicographic order; only the set matters.
  for (int i = 0; i < 4; ++i) {
    std::array<int, 4> a{0, 0, 0, 0};
    a[i] = k;
    out.push_back(a);
  }
  for (int a1 = 0; a1 <= k; ++a1)
    for (int a2 = 0; a1 + a2 <= k; ++a2)
      for (int a3 = 0; a1 + a2 + a3 <= k; ++a3) {
        const int a0 = k - a1 - a2 - a3;
        std::array<int, 4> a{a0, a1, a2, a3};
        if (std::count(a.begin(), a.end(), k) == 1) continue;
        out.push_back(a);
      }
  return out;
}

}  // namespace

int num_nodes(int degree) { return (degree + 1) * (degree + 2) * (degree + 3) / 6; }

const std::vector<std::array<int, 4>>& multi_indices(int degree) {
  static const auto tables = [] {
    std::vector<std::vector<std::array<int, 4>>> t(kMaxDegree + 1);
    for (int k = 1; k <= kMaxDegree; ++k) t[k] = enumerate(k);
    return t;
  }();
  if (degree < 1 || degree > kMaxDegree)
    throw Error("Lagrange degree " + std::to_string(degree) + " not supported");
  return tables[degree];
}

Bary node_bary(int degree, int i) {
  const auto& a = multi_indices(degree)[i];
  return Bary(a[0], a[1], a[2], a[3]) / static_cast<double>(degree);
}

namespace {

// R_m(s) = prod_{j<m} (k s - j) / (j + 1) and its derivative, m = 0..k.
void factor_table(int k, double s, double* r, double* dr) {
  r[0] = 1.0;
  dr[0] = 0.0;
  for (int m = 1; m <= k; ++m) {
    const double f = (k * s - (m - 1)) / m;
    r[m] = r[m - 1] * f;
    dr[m] = dr[m - 1] * f + r[m - 1] * (static_cast<double>(k) / m);
  }
}

}  // namespace

void eval(int degree, const Bary& lambda, Eigen::VectorXd& values, NodeDerivs& dlambda) {
  const auto& idx = multi_indices(degree);
  const int n = static_cast<int>(idx.size());
  double r[4][kMaxDegree + 1], dr[4][kMaxDegree + 1];
  for (int i = 0; i < 4; ++i) factor_table(degree, lambda[i], r[i], dr[i]);
  values.resize(n);
  dlambda.resize(n, 4);
  for (int a = 0; a < n; ++a) {
    const auto& m = idx[a];
    const double f0 = r[0][m[0]], f1 = r[1][m[1]], f2 = r[2][m[2]], f3 = r[3][m[3]];
    values[a] = f0 * f1 * f2 * f3;
    dlambda(a, 0) = dr[0][m[0]] * f1 * f2 * f3;
    dlambda(a, 1) = f0 * dr[1][m[1]] * f2 * f3;
    dlambda(a, 2) = f0 * f1 * dr[2][m[2]] * f3;
    dlambda(a, 3) = f0 * f1 * f2 * dr[3][m[3]];
  }
}

void eval_values(int degree, const Bary& lambda, Eigen::VectorXd& values) {
  const auto& idx = multi_indices(degree);
  const int n = static_cast<int>(idx.size());
  double r[4][kMaxDegree + 1], dr[4][kMaxDegree + 1];
  for (int i = 0; i < 4; ++i) factor_table(degree, lambda[i], r[i], dr[i]);
  values.resize(n);
  for (int a = 0; a < n; ++a) {
    const auto& m = idx[a];
    values[a] = r[0][m[0]] * r[1][m[1]] * r[2][m[2]] * r[3][m[3]];
  }
}

}  // namespace lagrange

TetFrame::TetFrame(const std::array<Vec3, 4>& verts) : v(verts) {
  Mat3 j;
  j.col(0) = v[1] - v[0];
  j.col(1) = v[2] - v[0];
  j.col(2) = v[3] - v[0];
  const double det = j.determinant();
  if (det == 0.0) throw Error("degenerate tetrahedron");
  volume = std::abs(det) / 6.0;
  const Mat3 inv = j.inverse();
  grad_lambda.row(1) = inv.row(0);
  grad_lambda.row(2) = inv.row(1);
  grad_lambda.row(3) = inv.row(2);
  grad_lambda.row(0) = -(inv.row(0) + inv.row(1) + inv.row(2));
}

TetFrame TetFrame::of(const Mesh& mesh, int tet) {
  return TetFrame({mesh.point(tet, 0), mesh.point(tet, 1), mesh.point(tet, 2), mesh.point(tet, 3)});
}

Bary TetFrame::bary(const Vec3& x) const {
  const Vec3 d = x - v[0];
  Bary l;
  l[1] = grad_lambda.row(1).dot(d);
  l[2] = grad_lambda.row(2).dot(d);
  l[3] = grad_lambda.row(3).dot(d);
  l[0] = 1.0 - l[1] - l[2] - l[3];
  return l;
}

namespace {

struct NodeKey {
  std::uint64_t lo = 0, hi = 0;
  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  size_t operator()(const NodeKey& k) const {
    return std::hash<std::uint64_t>()(k.lo * 0x9E3779B97F4A7C15ULL ^ k.hi);
  }
};

NodeKey make_key(const std::array<int, 4>& verts, const std::array<int, 4>& mult) {
  std::array<std::uint32_t, 4> packed{0, 0, 0, 0};
  int c = 0;
  for (int i = 0; i < 4; ++i)
    if (mult[i] > 0) packed[c++] = (static_cast<std::uint32_t>(verts[i]) << 4) | mult[i];
  std::sort(packed.begin(), packed.begin() + c);
  NodeKey k;
  k.lo = (static_cast<std::uint64_t>(packed[0]) << 32) | packed[1];
  k.hi = (static_cast<std::uint64_t>(packed[2]) << 32) | packed[3];
  return k;
}

}  // namespace

DofMap build_dof_map(const Mesh& mesh, std::span<const int> cells, int degree) {
  if (mesh.vertices.size() >= (1u << 28)) throw Error("build_dof_map: too many vertices");
  DofMap map;
  map.degree = degree;
  map.cells.assign(cells.begin(), cells.end());
  map.cell_of_tet.assign(mesh.tets.size(), -1);
  const auto& idx = lagrange::multi_indices(degree);
  const int nloc = static_cast<int>(idx.size());
  map.cell_nodes.resize(cells.size() * nloc);
  std::unordered_map<NodeKey, int, NodeKeyHash> ids;
  ids.reserve(cells.size() * nloc / 2);
  for (int c = 0; c < static_cast<int>(cells.size()); ++c) {
    const int t = cells[c];
    map.cell_of_tet[t] = c;
    const auto& verts = mesh.tets[t].v;
    for (int a = 0; a < nloc; ++a) {
      const auto [it, inserted] = ids.emplace(make_key(verts, idx[a]), map.num_nodes());
      if (inserted) {
        Vec3 x = Vec3::Zero();
        for (int i = 0; i < 4; ++i) x += idx[a][i] * mesh.vertices[verts[i]];
        map.node_points.push_back(x / degree);
      }
      map.cell_nodes[static_cast<size_t>(c) * nloc + a] = it->second;
    }
  }
  return map;
}

}  // namespace surfstokes
