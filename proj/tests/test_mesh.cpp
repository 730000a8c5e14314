#include <silhlab/mesh.hpp>
#include <silhlab/mesh_io.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "test_support.hpp"

using namespace silhlab;

TEST_CASE("cube statistics") {
  auto cube = testsupport::make_cube();
  MeshStats st = validate(cube);
  CHECK(st.n_faces == 12);
  CHECK(st.n_vertices == 8);
  CHECK(st.n_edges == 18);
  CHECK(st.n_boundary_edges == 0);
  CHECK(st.euler_characteristic == 2);
  CHECK(st.min_edge_length == Catch::Approx(1.0).margin(1e-15));
  CHECK(st.max_edge_length == Catch::Approx(std::sqrt(2.0)).margin(1e-15));
  // Right isosceles faces: smallest height 1/sqrt(2), fatness 1/2.
  CHECK(st.min_height == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
  CHECK(st.min_fatness == Catch::Approx(0.5).margin(1e-12));
  CHECK(testsupport::signed_volume(cube) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("tetrahedron statistics") {
  auto tet = testsupport::make_tetrahedron();
  MeshStats st = validate(tet);
  CHECK(st.n_faces == 4);
  CHECK(st.n_vertices == 4);
  CHECK(st.n_edges == 6);
  CHECK(st.euler_characteristic == 2);
  double edge = 2.0 * std::sqrt(2.0);
  CHECK(st.min_edge_length == Catch::Approx(edge).margin(1e-12));
  CHECK(st.max_edge_length == Catch::Approx(edge).margin(1e-12));
  // Equilateral: fatness = sqrt(3)/2.
  CHECK(st.min_fatness == Catch::Approx(std::sqrt(3.0) / 2.0).margin(1e-12));
  CHECK(testsupport::signed_volume(tet) == Catch::Approx(8.0 / 3.0).margin(1e-12));
}

TEST_CASE("edge table is canonical and face-order independent") {
  auto cube = testsupport::make_cube();
  EdgeAdjacency adj = build_adjacency(cube);
  REQUIRE(adj.edges.size() == 18);
  for (size_t e = 0; e < adj.edges.size(); ++e) {
    CHECK(adj.edges[e].a < adj.edges[e].b);
    if (e > 0) {
      const Edge& p = adj.edges[e - 1];
      const Edge& q = adj.edges[e];
      CHECK((p.a < q.a || (p.a == q.a && p.b < q.b)));
    }
    CHECK(adj.edges[e].face_left >= 0);
    CHECK(adj.edges[e].face_right >= 0);
  }

  TriangleMesh shuffled = cube;
  std::reverse(shuffled.faces.begin(), shuffled.faces.end());
  std::swap(shuffled.faces[2], shuffled.faces[9]);
  EdgeAdjacency adj2 = build_adjacency(shuffled);
  REQUIRE(adj2.edges.size() == adj.edges.size());
  for (size_t e = 0; e < adj.edges.size(); ++e) {
    CHECK(adj2.edges[e].a == adj.edges[e].a);
    CHECK(adj2.edges[e].b == adj.edges[e].b);
    CHECK(adj2.edges[e].length == adj.edges[e].length);
  }
}

TEST_CASE("find_edge") {
  auto cube = testsupport::make_cube();
  EdgeAdjacency adj = build_adjacency(cube);
  CHECK(adj.find_edge(0, 1) >= 0);
  CHECK(adj.find_edge(1, 0) == adj.find_edge(0, 1));
  CHECK(adj.find_edge(0, 2) >= 0);   // face diagonal
  CHECK(adj.find_edge(0, 6) == -1);  // space diagonal, not an edge
  CHECK(adj.find_edge(3, 5) == -1);
  for (auto [a, b] : testsupport::cube_diagonals()) CHECK(adj.find_edge(a, b) >= 0);
}

TEST_CASE("boundary edges") {
  auto tri = testsupport::make_triangle();
  EdgeAdjacency adj = build_adjacency(tri);
  CHECK(adj.edges.size() == 3);
  CHECK(adj.n_boundary_edges == 3);
  for (int e = 0; e < 3; ++e) {
    CHECK(adj.is_boundary(e));
    CHECK(adj.edges[static_cast<size_t>(e)].face_left == 0);
    CHECK(adj.edges[static_cast<size_t>(e)].face_right == EdgeAdjacency::kBoundaryFace);
  }
  MeshStats st = validate(tri);
  CHECK(st.euler_characteristic == 1);

  auto sq = testsupport::make_square();
  EdgeAdjacency sadj = build_adjacency(sq);
  CHECK(sadj.edges.size() == 5);
  CHECK(sadj.n_boundary_edges == 4);
  int diag = sadj.find_edge(0, 2);
  REQUIRE(diag >= 0);
  CHECK_FALSE(sadj.is_boundary(diag));
  CHECK(validate(sq).euler_characteristic == 1);
}

TEST_CASE("face helpers") {
  auto cube = testsupport::make_cube();
  CHECK(face_area(cube, 0) == Catch::Approx(0.5).margin(1e-15));
  Direction n2 = face_normal(cube, 2);  // top
  CHECK(static_cast<const Vec3&>(n2).z == Catch::Approx(1.0).margin(1e-15));
  Vec3 c0 = face_centroid(cube, 0);
  CHECK(c0.z == 0.0);
  auto normals = unit_face_normals(cube);
  REQUIRE(normals.size() == 12);
  CHECK(normals[0].z == Catch::Approx(-1.0).margin(1e-15));
  CHECK(normals[11].x == Catch::Approx(1.0).margin(1e-15));

  TriangleMesh eq;
  eq.vertices = {{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2.0, 0}};
  eq.faces = {{{0, 1, 2}}};
  CHECK(smallest_height(eq, 0) == Catch::Approx(std::sqrt(3.0) / 2.0).margin(1e-12));
}

TEST_CASE("structural errors") {
  auto cube = testsupport::make_cube();

  SECTION("non-manifold edge") {
    TriangleMesh m = cube;
    m.vertices.push_back({2, 2, 2});
    m.faces.push_back({{0, 1, 8}});  // third face on edge (0,1)
    CHECK_THROWS_AS(build_adjacency(m), NonManifoldEdge);
  }
  SECTION("inconsistent orientation") {
    TriangleMesh m = cube;
    std::swap(m.faces[4][0], m.faces[4][1]);
    CHECK_THROWS_AS(build_adjacency(m), InconsistentOrientation);
  }
  SECTION("repeated vertex in face") {
    TriangleMesh m = cube;
    m.faces[3] = {{4, 4, 7}};
    CHECK_THROWS_AS(build_adjacency(m), DegenerateFace);
  }
  SECTION("collinear face") {
    TriangleMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    m.faces = {{{0, 1, 2}}};
    CHECK_THROWS_AS(validate(m), DegenerateFace);
    CHECK_THROWS_AS(face_normal(m, 0), DegenerateFace);
  }
  SECTION("index out of range") {
    TriangleMesh m = cube;
    m.faces[0] = {{0, 2, 8}};
    CHECK_THROWS_AS(build_adjacency(m), MeshError);
    m.faces[0] = {{0, 2, -1}};
    CHECK_THROWS_AS(build_adjacency(m), MeshError);
  }
  SECTION("non-finite vertex") {
    TriangleMesh m = cube;
    m.vertices[3].y = std::nan("");
    CHECK_THROWS_AS(validate(m), MeshError);
  }
}

TEST_CASE("OFF round trip") {
  auto cube = testsupport::make_cube();
  std::string text = save_off(cube);
  TriangleMesh back = load_off(text);
  REQUIRE(back.vertices.size() == cube.vertices.size());
  REQUIRE(back.faces.size() == cube.faces.size());
  for (size_t i = 0; i < cube.vertices.size(); ++i) {
    CHECK(back.vertices[i].x == cube.vertices[i].x);
    CHECK(back.vertices[i].y == cube.vertices[i].y);
    CHECK(back.vertices[i].z == cube.vertices[i].z);
  }
  for (size_t i = 0; i < cube.faces.size(); ++i) CHECK(back.faces[i] == cube.faces[i]);
  // Idempotence: a second pass reproduces the bytes.
  CHECK(save_off(load_off(text)) == text);

  // 17 significant digits survive.
  TriangleMesh tiny;
  tiny.vertices = {{1.0 / 3.0, 6.283185307179586, -1e-17}, {1, 0, 0}, {0, 1, 0}};
  tiny.faces = {{{0, 1, 2}}};
  TriangleMesh tb = load_off(save_off(tiny));
  CHECK(tb.vertices[0].x == 1.0 / 3.0);
  CHECK(tb.vertices[0].y == 6.283185307179586);
  CHECK(tb.vertices[0].z == -1e-17);
}

TEST_CASE("OFF parser accepts comments and reports line numbers") {
  std::string good =
      "# comment\nOFF\n# counts\n3 1 0\n0 0 0\n1 0 0  # inline\n0 1 0\n3 0 1 2\n";
  TriangleMesh m = load_off(good);
  CHECK(m.vertices.size() == 3);
  CHECK(m.faces.size() == 1);

  auto line_of = [](const auto& fn) {
    try {
      fn();
    } catch (const ParseError& e) {
      return e.line_number;
    }
    return -1;
  };
  CHECK(line_of([] { load_off("NOPE\n3 1 0\n"); }) == 1);
  CHECK(line_of([] { load_off("OFF\n3 1\n"); }) == 2);
  CHECK(line_of([] { load_off("OFF\n3 1 0\n0 0 0\n1 0 zz\n0 1 0\n3 0 1 2\n"); }) == 4);
  CHECK(line_of([] { load_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 5\n"); }) == 6);
  CHECK(line_of([] { load_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\nextra\n"); }) == 7);
  CHECK(line_of([] { load_off("OFF\n3 1 0\n0 0 0\n"); }) > 0);  // truncated
  CHECK_THROWS_AS(load_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2\n"), NonTriangularFace);
}

TEST_CASE("OBJ subset") {
  std::string text =
      "# demo\nv 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nvt 0 0\n"
      "usemtl none\nf 1/1/1 2/2/1 3/3/1\n";
  TriangleMesh m = load_obj(text);
  REQUIRE(m.vertices.size() == 3);
  REQUIRE(m.faces.size() == 1);
  CHECK(m.faces[0] == std::array<int, 3>{{0, 1, 2}});

  // Negative indices are relative to the vertices defined so far.
  TriangleMesh r = load_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n");
  CHECK(r.faces[0] == std::array<int, 3>{{0, 1, 2}});

  CHECK_THROWS_AS(load_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 1 2 3 4\n"),
                  NonTriangularFace);
  CHECK_THROWS_AS(load_obj("v 0 0 0\nf 1 2 3\n"), ParseError);
  CHECK_THROWS_AS(load_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n"), ParseError);
  CHECK_THROWS_AS(load_obj("v 0 0\n"), ParseError);
}

TEST_CASE("load_mesh_file dispatches on extension") {
  std::string dir = testsupport::make_temp_dir();
  auto cube = testsupport::make_cube();
  write_file_atomic(dir + "/m.off", save_off(cube));
  CHECK(load_mesh_file(dir + "/m.off").faces.size() == 12);
  write_file_atomic(dir + "/m.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
  CHECK(load_mesh_file(dir + "/m.obj").faces.size() == 1);
  write_file_atomic(dir + "/m.stl", "whatever");
  CHECK_THROWS_AS(load_mesh_file(dir + "/m.stl"), FileError);
  CHECK_THROWS_AS(load_mesh_file(dir + "/absent.off"), FileError);
}
