// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include <numeric>

#include "doctest.h"
#include "kwave/error.hpp"
#include "kwave/geometry.hpp"

using namespace kwave;

TEST_SUITE("geometry")
{
  TEST_CASE("interval mesh layout")
  {
    DomainSpec d;
    d.extent = {2.0, 1.0};
    d.resolution = {8, 1};
    const Mesh m = BuildMesh(d);
    CHECK(m.NumNodes() == 9);
    CHECK(m.NumElements() == 8);
    CHECK(m.h == doctest::Approx(0.25));
    REQUIRE(m.dirichlet_nodes.size() == 1);
    CHECK(m.dirichlet_nodes[0] == 0);
    REQUIRE(m.gamma1_nodes.size() == 1);
    CHECK(m.gamma1_nodes[0] == 8);
    CHECK(m.gamma1_weights[0] == doctest::Approx(1.0));
    CHECK(m.free_nodes.size() == 8);
    CHECK(m.nodes[8][0] == doctest::Approx(2.0));
  }

  TEST_CASE("left acoustic end")
  {
    DomainSpec d;
    d.gamma1_faces = {Face::Left};
    d.resolution = {4, 1};
    const Mesh m = BuildMesh(d);
    CHECK(m.gamma1_nodes == std::vector<int>{0});
    CHECK(m.dirichlet_nodes == std::vector<int>{4});
  }

  TEST_CASE("rectangle mesh and boundary measure")
  {
    DomainSpec d;
    d.dimension = 2;
    d.extent = {1.0, 2.0};
    d.resolution = {4, 8};
    d.gamma1_faces = {Face::Right};
    const Mesh m = BuildMesh(d);
    CHECK(m.NumNodes() == 5 * 9);
    CHECK(m.NumElements() == 2 * 4 * 8);
    CHECK(m.Gamma1Measure() == doctest::Approx(2.0));
    const double wsum = std::accumulate(m.gamma1_weights.begin(), m.gamma1_weights.end(), 0.0);
    CHECK(wsum == doctest::Approx(2.0));
    // Corner nodes of the acoustic side belong to Gamma0.
    for (int n : m.gamma1_nodes)
    {
      CHECK_FALSE(m.is_dirichlet[n]);
      CHECK(m.nodes[n][0] == doctest::Approx(1.0));
    }
    CHECK(m.gamma1_nodes.size() == 7);
    // Node (i, j) = j * (nx + 1) + i.
    CHECK(m.nodes[2 * 5 + 3][0] == doctest::Approx(0.75));
    CHECK(m.nodes[2 * 5 + 3][1] == doctest::Approx(0.5));
  }

  TEST_CASE("two acoustic sides share the corner")
  {
    DomainSpec d;
    d.dimension = 2;
    d.resolution = {4, 4};
    d.gamma1_faces = {Face::Right, Face::Top};
    const Mesh m = BuildMesh(d);
    CHECK(m.Gamma1Measure() == doctest::Approx(2.0));
  }

  TEST_CASE("validation collects every problem")
  {
    DomainSpec d;
    d.dimension = 1;
    d.extent = {-1.0, 1.0};
    d.resolution = {1, 1};
    d.gamma1_faces = {Face::Left, Face::Right};
    try
    {
      ValidateDomain(d);
      FAIL("expected a validation error");
    }
    catch (const Error &e)
    {
      const std::string msg = e.what();
      CHECK(e.code() == ErrorCode::Validation);
      CHECK(msg.find("extent") != std::string::npos);
      CHECK(msg.find("resolution") != std::string::npos);
      CHECK(msg.find("Gamma0 empty") != std::string::npos);
    }
    DomainSpec bad;
    bad.gamma1_faces = {Face::Top};
    CHECK_THROWS_AS(ValidateDomain(bad), Error);
    bad.dimension = 3;
    CHECK_THROWS_AS(BuildMesh(bad), Error);
  }

  TEST_CASE("face names round trip")
  {
    for (Face f : {Face::Left, Face::Right, Face::Bottom, Face::Top})
    {
      CHECK(FaceFromString(ToString(f)) == f);
    }
    CHECK_THROWS_AS(FaceFromString("front"), Error);
  }
}
