#include "surfstokes/cut.hpp"

#include <fstream>

namespace surfstokes {

Vec3 world_point(const Mesh& mesh, int tet, const Bary& l) {
  return l[0] * mesh.point(tet, 0) + l[1] * mesh.point(tet, 1) + l[2] * mesh.point(tet, 2) +
         l[3] * mesh.point(tet, 3);
}

double flat_area(const Mesh& mesh, const GammaTriangle& tri) {
  const Vec3 a = world_point(mesh, tri.tet, tri.bary[0]);
  const Vec3 b = world_point(mesh, tri.tet, tri.bary[1]);
  const Vec3 c = world_point(mesh, tri.tet, tri.bary[2]);
  return 0.5 * (b - a).cross(c - a).norm();
}

CutTopology classify_elements(const Mesh& mesh, const LevelSetBundle& bundle) {
  CutTopology topo;
  const auto& phi = bundle.vertex_values();
  topo.active_index.assign(mesh.tets.size(), -1);
  for (int t = 0; t < static_cast<int>(mesh.tets.size()); ++t) {
    int pos = 0;
    for (int v : mesh.tets[t].v) pos += positive_side(phi[v]) ? 1 : 0;
    if (pos == 0 || pos == 4) continue;
    topo.active_index[t] = topo.num_cells();
    topo.active_tets.push_back(t);
    topo.patch_volume += mesh.volume(t);
  }
  if (topo.active_tets.empty()) throw Error("classify_elements: no element is cut by the surface");
  return topo;
}

std::vector<std::array<Bary, 3>> march_tet(const std::array<double, 4>& values,
                                           const std::array<Vec3, 4>& verts) {
  std::vector<int> neg, pos;
  for (int i = 0; i < 4; ++i) (positive_side(values[i]) ? pos : neg).push_back(i);
  auto cross = [&](int a, int b) {
    const double t = values[a] / (values[a] - values[b]);
    Bary l = Bary::Zero();
    l[a] = 1.0 - t;
    l[b] = t;
    return l;
  };
  auto world = [&](const Bary& l) {
    return Vec3(l[0] * verts[0] + l[1] * verts[1] + l[2] * verts[2] + l[3] * verts[3]);
  };
  std::vector<std::array<Bary, 3>> out;
  if (neg.empty() || pos.empty()) return out;
  if (neg.size() == 1 || pos.size() == 1) {
    const bool lone_neg = neg.size() == 1;
    const int a = lone_neg ? neg[0] : pos[0];
    const auto& others = lone_neg ? pos : neg;
    out.push_back({cross(a, others[0]), cross(a, others[1]), cross(a, others[2])});
    return out;
  }
  // Quadrilateral a-c, a-d, b-d, b-c in cyclic order.
  const int a = neg[0], b = neg[1], c = pos[0], d = pos[1];
  const std::array<Bary, 4> q{cross(a, c), cross(a, d), cross(b, d), cross(b, c)};
  const double d02 = (world(q[0]) - world(q[2])).squaredNorm();
  const double d13 = (world(q[1]) - world(q[3])).squaredNorm();
  if (d02 <= d13) {
    out.push_back({q[0], q[1], q[2]});
    out.push_back({q[0], q[2], q[3]});
  } else {
    out.push_back({q[1], q[2], q[3]});
    out.push_back({q[1], q[3], q[0]});
  }
  return out;
}

void extract_gamma_lin(CutTopology& topo, const Mesh& mesh, const LevelSetBundle& bundle) {
  const auto& phi = bundle.vertex_values();
  topo.gamma_lin.clear();
  topo.tri_offsets.assign(1, 0);
  topo.dropped_degenerate = 0;
  for (int t : topo.active_tets) {
    std::array<double, 4> vals;
    std::array<Vec3, 4> verts;
    for (int i = 0; i < 4; ++i) {
      vals[i] = phi[mesh.tets[t].v[i]];
      verts[i] = mesh.point(t, i);
    }
    double face_area = 0.0;
    for (int i = 0; i < 4; ++i) {
      const Vec3& p = verts[(i + 1) % 4];
      face_area = std::max(face_area, 0.5 * (verts[(i + 2) % 4] - p).cross(verts[(i + 3) % 4] - p).norm());
    }
    const Vec3 g = bundle.grad_phi_hat(t);
    for (auto tri : march_tet(vals, verts)) {
      GammaTriangle gt{t, tri};
      const Vec3 p0 = world_point(mesh, t, tri[0]);
      const Vec3 nrm = (world_point(mesh, t, tri[1]) - p0).cross(world_point(mesh, t, tri[2]) - p0);
      if (0.5 * nrm.norm() < 1e-14 * face_area) {
        ++topo.dropped_degenerate;
        continue;
      }
      if (nrm.dot(g) < 0.0) std::swap(gt.bary[1], gt.bary[2]);
      topo.gamma_lin.push_back(gt);
    }
    topo.tri_offsets.push_back(static_cast<int>(topo.gamma_lin.size()));
  }
}

void write_stl(const Mesh& mesh, const CutTopology& topo, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("write_stl: cannot open " + path);
  os.precision(17);
  os << "solid gamma_lin\n";
  for (const auto& tri : topo.gamma_lin) {
    const Vec3 a = world_point(mesh, tri.tet, tri.bary[0]);
    const Vec3 b = world_point(mesh, tri.tet, tri.bary[1]);
    const Vec3 c = world_point(mesh, tri.tet, tri.bary[2]);
    const Vec3 n = (b - a).cross(c - a).normalized();
    os << " facet normal " << n[0] << ' ' << n[1] << ' ' << n[2] << "\n  outer loop\n";
    for (const Vec3* p : {&a, &b, &c}) os << "   vertex " << (*p)[0] << ' ' << (*p)[1] << ' ' << (*p)[2] << '\n';
    os << "  endloop\n endfacet\n";
  }
  os << "endsolid gamma_lin\n";
}

}  // namespace surfstokes
