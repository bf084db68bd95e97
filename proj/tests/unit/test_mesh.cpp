#include <doctest.h>

#include <numbers>
#include <sstream>

#include "rmf/checks/oracles.hpp"
#include "rmf/curves.hpp"
#include "rmf/frames.hpp"
#include "rmf/mesh.hpp"

using namespace rmf;

namespace {

std::pair<frames::CurveSamples, frames::FrameField> straight(double length, double h) {
  const auto c = frames::sample_curve(curves::line(), 0.0, length, h);
  frames::FrameField f;
  f.sigma.assign(c.size(), Mat3::Identity());
  return {c, f};
}

}  // namespace

TEST_CASE("cylinder: counts, boundary and orientation") {
  const auto [c, f] = straight(1.0, 0.1);
  const auto m = mesh::sweep_surface(c, f, 0.5, 8);
  CHECK(m.vertices.size() == 11 * 8);
  CHECK(m.triangles.size() == 10 * 8 * 2);
  const auto st = mesh::mesh_stats(m);
  CHECK(st.valid());
  CHECK(st.boundary_edges == 16);
  CHECK(st.euler_characteristic == 0);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    CHECK(std::hypot(m.vertices[i].y(), m.vertices[i].z()) == doctest::Approx(0.5));
    // Normals point away from the axis.
    CHECK(m.normals[i].dot(Vec3(0, m.vertices[i].y(), m.vertices[i].z())) > 0.0);
  }
}

TEST_CASE("closed circle gives a torus") {
  const auto c = frames::sample_curve(curves::circle(1.0), 0.0, 2.0 * std::numbers::pi, 1e-2);
  const auto f = frames::rm_frame_integrate(c, Vec3(0, 0, 1));
  const auto m = mesh::sweep_surface(c, f, 0.2, 16);
  CHECK(checks::torus_deviation(m.vertices, 1.0, 0.2) < 1e-9);
  CHECK(mesh::mesh_stats(m).valid());
}

TEST_CASE("OBJ and PLY output") {
  const auto [c, f] = straight(1.0, 0.5);
  const auto m = mesh::sweep_surface(c, f, 1.0, 4);
  std::ostringstream obj;
  mesh::write_obj(obj, m);
  const std::string text = obj.str();
  std::size_t v = 0, vn = 0, faces = 0;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) {
    if (line.rfind("v ", 0) == 0) ++v;
    if (line.rfind("vn ", 0) == 0) ++vn;
    if (line.rfind("f ", 0) == 0) ++faces;
  }
  CHECK(v == m.vertices.size());
  CHECK(vn == m.normals.size());
  CHECK(faces == m.triangles.size());
  CHECK(text.find("f 1//1 ") != std::string::npos);
  std::ostringstream ply;
  mesh::write_ply(ply, m);
  CHECK(ply.str().rfind("ply\nformat binary_little_endian 1.0\n", 0) == 0);
  const auto header_end = ply.str().find("end_header\n") + 11;
  CHECK(ply.str().size() - header_end == m.vertices.size() * 24 + m.triangles.size() * 13);
}

TEST_CASE("degenerate input") {
  const auto [c, f] = straight(1.0, 0.5);
  CHECK_THROWS_AS(mesh::sweep_surface(c, f, 0.0, 8), mesh::MeshError);
  CHECK_THROWS_AS(mesh::sweep_surface(c, f, 1.0, 2), mesh::MeshError);
}
