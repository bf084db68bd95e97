#include "rmf/mesh.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>

#include <Eigen/Geometry>

namespace rmf::mesh {

TriangleMesh sweep_surface(const frames::CurveSamples& curve, const frames::FrameField& frame, double radius,
                           int n_around) {
  if (!(radius > 0.0)) throw MeshError("radius must be positive");
  if (n_around < 3) throw MeshError("n_around must be at least 3");
  const std::size_t n = curve.size();
  if (frame.size() != n) throw MeshError("curve and frame differ in length");
  if (n < 2) throw MeshError("need at least two nodes");
  TriangleMesh m;
  const auto na = static_cast<std::size_t>(n_around);
  m.vertices.resize(n * na);
  m.normals.resize(n * na);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 u = frame.row(i, 1), w = frame.row(i, 2);
    for (std::size_t k = 0; k < na; ++k) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / n_around;
      const Vec3 dir = std::cos(phi) * u + std::sin(phi) * w;
      m.vertices[i * na + k] = curve.p[i] + radius * dir;
      m.normals[i * na + k] = dir;
    }
  }
  auto id = [na](std::size_t i, std::size_t k) { return static_cast<std::uint32_t>(i * na + k % na); };
  m.triangles.reserve(2 * (n - 1) * na);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t k = 0; k < na; ++k) {
      const auto a = id(i, k), b = id(i, k + 1), c = id(i + 1, k + 1), d = id(i + 1, k);
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    }
  }
  return m;
}

void write_obj(std::ostream& os, const TriangleMesh& m) {
  char buf[128];
  os << "# tube mesh: " << m.vertices.size() << " vertices, " << m.triangles.size() << " triangles\n";
  for (const auto& v : m.vertices) {
    std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", v.x(), v.y(), v.z());
    os << buf;
  }
  for (const auto& v : m.normals) {
    std::snprintf(buf, sizeof buf, "vn %.9g %.9g %.9g\n", v.x(), v.y(), v.z());
    os << buf;
  }
  const bool with_normals = m.normals.size() == m.vertices.size();
  for (const auto& t : m.triangles) {
    if (with_normals)
      std::snprintf(buf, sizeof buf, "f %u//%u %u//%u %u//%u\n", t[0] + 1, t[0] + 1, t[1] + 1, t[1] + 1, t[2] + 1,
                    t[2] + 1);
    else
      std::snprintf(buf, sizeof buf, "f %u %u %u\n", t[0] + 1, t[1] + 1, t[2] + 1);
    os << buf;
  }
}

void write_obj(const std::string& path, const TriangleMesh& m) {
  std::ofstream os(path);
  if (!os) throw MeshError("cannot open " + path);
  write_obj(os, m);
}

namespace {

template <class T>
void put(std::ostream& os, T value) {
  static_assert(std::endian::native == std::endian::little, "PLY writer assumes a little-endian host");
  char raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  os.write(raw, sizeof(T));
}

}  // namespace

void write_ply(std::ostream& os, const TriangleMesh& m) {
  const bool with_normals = m.normals.size() == m.vertices.size();
  os << "ply\nformat binary_little_endian 1.0\n";
  os << "element vertex " << m.vertices.size() << "\n";
  os << "property float x\nproperty float y\nproperty float z\n";
  if (with_normals) os << "property float nx\nproperty float ny\nproperty float nz\n";
  os << "element face " << m.triangles.size() << "\n";
  os << "property list uchar uint vertex_indices\nend_header\n";
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    for (int k = 0; k < 3; ++k) put(os, static_cast<float>(m.vertices[i][k]));
    if (with_normals)
      for (int k = 0; k < 3; ++k) put(os, static_cast<float>(m.normals[i][k]));
  }
  for (const auto& t : m.triangles) {
    put(os, static_cast<std::uint8_t>(3));
    for (auto idx : t) put(os, idx);
  }
}

void write_ply(const std::string& path, const TriangleMesh& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw MeshError("cannot open " + path);
  write_ply(os, m);
}

MeshStats mesh_stats(const TriangleMesh& m, double area_eps) {
  MeshStats st;
  st.vertices = m.vertices.size();
  st.triangles = m.triangles.size();
  st.min_area = m.triangles.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  // Undirected edge -> (uses, net orientation)
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<int, int>> edges;
  for (const auto& t : m.triangles) {
    for (auto idx : t)
      if (idx >= m.vertices.size()) throw MeshError("triangle index out of range");
    const Vec3 e1 = m.vertices[t[1]] - m.vertices[t[0]];
    const Vec3 e2 = m.vertices[t[2]] - m.vertices[t[0]];
    const double area = 0.5 * e1.cross(e2).norm();
    st.min_area = std::min(st.min_area, area);
    if (area <= area_eps) ++st.degenerate_triangles;
    for (int k = 0; k < 3; ++k) {
      const auto a = t[k], b = t[(k + 1) % 3];
      auto& e = edges[{std::min(a, b), std::max(a, b)}];
      ++e.first;
      e.second += a < b ? 1 : -1;
    }
  }
  st.edges = edges.size();
  for (const auto& [key, e] : edges) {
    if (e.first == 1) ++st.boundary_edges;
    if (e.first > 2) ++st.non_manifold_edges;
    if (e.first == 2 && e.second != 0) ++st.inconsistent_edges;
  }
  st.euler_characteristic = static_cast<long>(st.vertices) - static_cast<long>(st.edges) +
                            static_cast<long>(st.triangles);
  return st;
}

}  // namespace rmf::mesh
