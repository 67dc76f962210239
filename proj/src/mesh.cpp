#include "surfstokes/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <numbers>

#include "surfstokes/surface.hpp"

namespace surfstokes {

double Mesh::signed_volume(int tet) const {
  const auto& t = tets[tet];
  const Vec3& a = vertices[t.v[0]];
  Mat3 m;
  m.col(0) = vertices[t.v[1]] - a;
  m.col(1) = vertices[t.v[2]] - a;
  m.col(2) = vertices[t.v[3]] - a;
  return m.determinant() / 6.0;
}

std::array<int, 4> Mesh::oriented(int tet) const {
  auto v = tets[tet].v;
  if (signed_volume(tet) < 0.0) std::swap(v[0], v[1]);
  return v;
}

double Mesh::diameter(int tet) const {
  double d = 0.0;
  for (const auto& e : kTetEdges) d = std::max(d, (point(tet, e[0]) - point(tet, e[1])).norm());
  return d;
}

double Mesh::total_volume() const {
  // Neumaier summation; the finest meshes have millions of tets.
  double s = 0.0, c = 0.0;
  for (int t = 0; t < static_cast<int>(tets.size()); ++t) {
    const double v = volume(t), n = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - n) + v : (v - n) + s;
    s = n;
  }
  return s + c;
}

Mesh build_initial_mesh(const Box& box, double target_h) {
  const Vec3 len = box.hi - box.lo;
  if (!(target_h > 0.0)) throw Error("build_initial_mesh: target_h must be positive");
  if (len.minCoeff() <= 0.0) throw Error("build_initial_mesh: degenerate box");
  if (target_h > len.minCoeff() * (1.0 + 1e-12))
    throw Error("build_initial_mesh: target_h exceeds the shortest box edge");

  std::array<int, 3> n{};
  for (int i = 0; i < 3; ++i) n[i] = static_cast<int>(std::ceil(len[i] / target_h - 1e-12));
  const Vec3 step(len[0] / n[0], len[1] / n[1], len[2] / n[2]);

  Mesh mesh;
  mesh.box = box;
  mesh.coarse_h = step.maxCoeff();
  auto vid = [&](int i, int j, int k) { return (k * (n[1] + 1) + j) * (n[0] + 1) + i; };
  for (int k = 0; k <= n[2]; ++k)
    for (int j = 0; j <= n[1]; ++j)
      for (int i = 0; i <= n[0]; ++i)
        mesh.vertices.emplace_back(box.lo + Vec3(i * step[0], j * step[1], k * step[2]));

  // Kuhn split: one tet per permutation, vertices along the monotone path
  // from the lower to the upper cube corner.
  constexpr std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (int k = 0; k < n[2]; ++k)
    for (int j = 0; j < n[1]; ++j)
      for (int i = 0; i < n[0]; ++i)
        for (const auto& p : perms) {
          std::array<int, 3> c{i, j, k};
          Tet t;
          t.v[0] = vid(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[p[s]];
            t.v[s + 1] = vid(c[0], c[1], c[2]);
          }
          mesh.tets.push_back(t);
        }
  return mesh;
}

namespace {

// Maubach bisection of t; returns the two children (parent index unset).
std::array<Tet, 2> bisect(const Tet& t, int mid) {
  const int k = t.tag;
  Tet c1, c2;
  int a = 0, b = 0;
  for (int i = 0; i < k; ++i) c1.v[a++] = t.v[i];
  c1.v[a++] = mid;
  for (int i = 1; i <= k; ++i) c2.v[b++] = t.v[i];
  c2.v[b++] = mid;
  for (int i = k + 1; i < 4; ++i) {
    c1.v[a++] = t.v[i];
    c2.v[b++] = t.v[i];
  }
  const int tag = k > 1 ? k - 1 : 3;
  c1.tag = c2.tag = tag;
  c1.generation = c2.generation = t.generation + 1;
  return {c1, c2};
}

}  // namespace

Mesh refine_marked(const Mesh& mesh, std::span<const int> marked) {
  Mesh out = mesh;
  const int n0 = static_cast<int>(out.tets.size());
  std::vector<char> alive(n0, 1);
  std::unordered_map<std::uint64_t, std::vector<int>> edge_tets;
  edge_tets.reserve(static_cast<size_t>(n0) * 2);
  auto register_edges = [&](int t) {
    const auto& v = out.tets[t].v;
    for (const auto& e : kTetEdges) edge_tets[edge_key(v[e[0]], v[e[1]])].push_back(t);
  };
  for (int t = 0; t < n0; ++t) register_edges(t);

  std::deque<int> queue;
  for (int t : marked) {
    if (t < 0 || t >= n0) throw Error("refine_marked: tet index " + std::to_string(t) + " out of range");
    queue.push_back(t);
  }

  while (!queue.empty()) {
    const int t = queue.front();
    queue.pop_front();
    if (!alive[t]) continue;
    const Tet parent = out.tets[t];
    const int va = parent.v[0], vb = parent.v[parent.tag];
    const std::uint64_t key = edge_key(va, vb);
    int mid;
    if (auto it = out.midpoints.find(key); it != out.midpoints.end()) {
      mid = it->second;
    } else {
      mid = static_cast<int>(out.vertices.size());
      out.vertices.push_back(0.5 * (out.vertices[va] + out.vertices[vb]));
      out.midpoints.emplace(key, mid);
    }
    alive[t] = 0;
    const int hist = static_cast<int>(out.history.size());
    out.history.push_back(parent);
    for (Tet child : bisect(parent, mid)) {
      child.parent = hist;
      const int c = static_cast<int>(out.tets.size());
      out.tets.push_back(child);
      alive.push_back(1);
      register_edges(c);
      for (const auto& e : kTetEdges)
        if (out.midpoints.count(edge_key(child.v[e[0]], child.v[e[1]]))) {
          queue.push_back(c);
          break;
        }
    }
    // Every other leaf on the bisected edge now has a hanging vertex.
    for (int s : edge_tets[key])
      if (alive[s]) queue.push_back(s);
  }

  std::vector<Tet> leaves;
  leaves.reserve(out.tets.size());
  for (size_t t = 0; t < out.tets.size(); ++t)
    if (alive[t]) leaves.push_back(out.tets[t]);
  out.tets = std::move(leaves);
  return out;
}

bool touches_zero_level(const Mesh& mesh, int tet, std::span<const double> vertex_values) {
  double lo = vertex_values[mesh.tets[tet].v[0]], hi = lo;
  for (int i = 1; i < 4; ++i) {
    const double x = vertex_values[mesh.tets[tet].v[i]];
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  return lo <= 0.0 && hi >= 0.0;
}

Mesh refine_toward_surface(const Mesh& mesh, const AnalyticSurface& surface, int levels) {
  if (levels < 0) throw Error("refine_toward_surface: negative level count");
  Mesh cur = mesh;
  std::vector<double> phi;
  for (int l = 0; l < levels; ++l) {
    const int target_generation = 3 * (cur.level + 1);
    for (int pass = 0;; ++pass) {
      phi.resize(cur.vertices.size());
      for (size_t i = 0; i < cur.vertices.size(); ++i) phi[i] = surface.eval(cur.vertices[i]);
      std::vector<int> marked;
      for (int t = 0; t < static_cast<int>(cur.tets.size()); ++t)
        if (cur.tets[t].generation < target_generation && touches_zero_level(cur, t, phi))
          marked.push_back(t);
      if (marked.empty()) {
        if (pass == 0)
          throw Error("refine_toward_surface: no element intersects the surface at level " +
                      std::to_string(cur.level));
        break;
      }
      cur = refine_marked(cur, marked);
    }
    ++cur.level;
  }
  return cur;
}

std::vector<std::array<int, 4>> face_neighbors(const Mesh& mesh) {
  const int n = static_cast<int>(mesh.tets.size());
  std::vector<std::array<int, 4>> nb(n, {-1, -1, -1, -1});
  std::map<std::array<int, 3>, std::pair<int, int>> open;  // face -> (tet, local)
  for (int t = 0; t < n; ++t)
    for (int i = 0; i < 4; ++i) {
      std::array<int, 3> f;
      int c = 0;
      for (int j = 0; j < 4; ++j)
        if (j != i) f[c++] = mesh.tets[t].v[j];
      std::sort(f.begin(), f.end());
      auto [it, inserted] = open.emplace(f, std::make_pair(t, i));
      if (!inserted) {
        nb[t][i] = it->second.first;
        nb[it->second.first][it->second.second] = t;
        open.erase(it);
      }
    }
  return nb;
}

std::string conformity_defect(const Mesh& mesh) {
  for (int t = 0; t < static_cast<int>(mesh.tets.size()); ++t)
    for (const auto& e : kTetEdges)
      if (mesh.midpoints.count(edge_key(mesh.tets[t].v[e[0]], mesh.tets[t].v[e[1]])))
        return "tet " + std::to_string(t) + " has a hanging vertex on an edge";

  std::map<std::array<int, 3>, int> faces;
  for (int t = 0; t < static_cast<int>(mesh.tets.size()); ++t)
    for (int i = 0; i < 4; ++i) {
      std::array<int, 3> f;
      int c = 0;
      for (int j = 0; j < 4; ++j)
        if (j != i) f[c++] = mesh.tets[t].v[j];
      std::sort(f.begin(), f.end());
      if (++faces[f] > 2) return "face shared by more than two tets";
    }
  const double tol = 1e-12 * (mesh.box.hi - mesh.box.lo).norm();
  for (const auto& [f, count] : faces) {
    if (count != 1) continue;
    bool on_boundary = false;
    for (int axis = 0; axis < 3 && !on_boundary; ++axis)
      for (double plane : {mesh.box.lo[axis], mesh.box.hi[axis]}) {
        bool all = true;
        for (int v : f) all = all && std::abs(mesh.vertices[v][axis] - plane) < tol;
        on_boundary = on_boundary || all;
      }
    if (!on_boundary) return "interior face with a single incident tet";
  }
  return {};
}

double min_dihedral_angle(const Mesh& mesh) {
  double best = std::numbers::pi;
  for (int t = 0; t < static_cast<int>(mesh.tets.size()); ++t) {
    std::array<Vec3, 4> p;
    for (int i = 0; i < 4; ++i) p[i] = mesh.point(t, i);
    // Outward face normals; the dihedral angle at an edge is pi minus the
    // angle between the normals of the two faces meeting there.
    std::array<Vec3, 4> nrm;
    for (int i = 0; i < 4; ++i) {
      const int a = (i + 1) % 4, b = (i + 2) % 4, c = (i + 3) % 4;
      Vec3 nn = (p[b] - p[a]).cross(p[c] - p[a]).normalized();
      if (nn.dot(p[i] - p[a]) > 0) nn = -nn;
      nrm[i] = nn;
    }
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const double c = std::clamp(-nrm[i].dot(nrm[j]), -1.0, 1.0);
        best = std::min(best, std::acos(c));
      }
  }
  return best;
}

void write_vtk(const Mesh& mesh, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("write_vtk: cannot open " + path);
  os.precision(17);
  os << "# vtk DataFile Version 3.0\nbackground mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.vertices.size() << " double\n";
  for (const auto& v : mesh.vertices) os << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  const size_t n = mesh.tets.size();
  os << "CELLS " << n << ' ' << 5 * n << '\n';
  for (int t = 0; t < static_cast<int>(n); ++t) {
    const auto v = mesh.oriented(t);
    os << "4 " << v[0] << ' ' << v[1] << ' ' << v[2] << ' ' << v[3] << '\n';
  }
  os << "CELL_TYPES " << n << '\n';
  for (size_t t = 0; t < n; ++t) os << "10\n";
  os << "CELL_DATA " << n << "\nSCALARS generation int 1\nLOOKUP_TABLE default\n";
  for (const auto& t : mesh.tets) os << t.generation << '\n';
}

}  // namespace surfstokes
