#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmf/frames.hpp"

namespace rmf::mesh {

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;  // per vertex
  std::vector<std::array<std::uint32_t, 3>> triangles;
};

/// Tube of circular cross sections in the (row 2, row 3) plane of the frame.
/// Vertex (i, k) = P_i + r (cos phi_k row2 + sin phi_k row3), phi_k = 2 pi k / n.
/// Triangles wind so that normals point away from the curve. Ends stay open;
/// self-intersections are not detected.
TriangleMesh sweep_surface(const frames::CurveSamples& curve, const frames::FrameField& frame, double radius,
                           int n_around);

void write_obj(std::ostream& os, const TriangleMesh& m);
void write_obj(const std::string& path, const TriangleMesh& m);
/// Binary little-endian PLY with float vertices and normals.
void write_ply(std::ostream& os, const TriangleMesh& m);
void write_ply(const std::string& path, const TriangleMesh& m);

struct MeshStats {
  std::size_t vertices = 0, triangles = 0, edges = 0;
  std::size_t degenerate_triangles = 0;  // area below the threshold
  std::size_t boundary_edges = 0;        // used by one triangle
  std::size_t non_manifold_edges = 0;    // used by more than two triangles
  std::size_t inconsistent_edges = 0;    // interior edges traversed the same way twice
  long euler_characteristic = 0;
  double min_area = 0.0;
  bool valid() const { return degenerate_triangles == 0 && non_manifold_edges == 0 && inconsistent_edges == 0; }
};

MeshStats mesh_stats(const TriangleMesh& m, double area_eps = 1e-14);

}  // namespace rmf::mesh
