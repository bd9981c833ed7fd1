// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "kwave/assembly.hpp"
#include "kwave/error.hpp"

using namespace kwave;

namespace
{

Field Interpolate(const Mesh &m, double (*f)(double, double))
{
  Field u(m.NumNodes());
  for (int i = 0; i < m.NumNodes(); i++)
  {
    u[i] = m.is_dirichlet[i] ? 0.0 : f(m.nodes[i][0], m.nodes[i][1]);
  }
  return u;
}

}  // namespace

TEST_SUITE("assembly")
{
  TEST_CASE("1D matrices")
  {
    DomainSpec d;
    d.resolution = {4, 1};
    const Mesh m = BuildMesh(d);
    const DiscreteOperators ops = Assemble(m, PhysicalParams{});
    CHECK(ops.stiffness.coeff(1, 1) == doctest::Approx(8.0));
    CHECK(ops.stiffness.coeff(1, 2) == doctest::Approx(-4.0));
    CHECK(ops.mass.coeff(1, 1) == doctest::Approx(2.0 / 12.0));
    CHECK(ops.mass.coeff(1, 2) == doctest::Approx(1.0 / 24.0));
    CHECK(ops.lumped_mass.sum() == doctest::Approx(1.0));
    CHECK(ops.lumped_mass[4] == doctest::Approx(0.125));
  }

  TEST_CASE("2D norms agree with the matrices")
  {
    DomainSpec d;
    d.dimension = 2;
    d.resolution = {5, 3};
    d.gamma1_faces = {Face::Right, Face::Top};
    const Mesh m = BuildMesh(d);
    const DiscreteOperators ops = Assemble(m, PhysicalParams{});
    const Field u = Interpolate(m, [](double x, double y) { return x * y; });
    CHECK(GradNormSq(ops, u) == doctest::Approx(u.dot(ops.stiffness * u)));
    CHECK(L2NormSq(ops, u) == doctest::Approx(u.dot(ops.mass * u)));
    // Mass of the constant-one field over the whole rectangle.
    CHECK(ops.mass.sum() == doctest::Approx(1.0));
    CHECK(ops.lumped_mass.sum() == doctest::Approx(1.0));
  }

  TEST_CASE("Lk norm of a linear function")
  {
    DomainSpec d;
    d.resolution = {3, 1};
    const Mesh m = BuildMesh(d);
    const DiscreteOperators ops = Assemble(m, PhysicalParams{});
    Field u(4);
    u << 0.0, 1.0 / 3, 2.0 / 3, 1.0;
    // int_0^1 x^4 = 1/5; the quadrature is exact for piecewise polynomials of degree 4.
    CHECK(LkNormPow(ops, u, 4.0) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(TraceNormSq(ops, u) == doctest::Approx(1.0));
  }

  TEST_CASE("source vector is the gradient of ||u||_k^k / k")
  {
    for (int dim : {1, 2})
    {
      DomainSpec d;
      d.dimension = dim;
      d.resolution = {6, 5};
      const Mesh m = BuildMesh(d);
      for (double k : {3.0, 4.0, 5.5})
      {
        PhysicalParams p;
        p.k_exp = k;
        const DiscreteOperators ops = Assemble(m, p);
        Field u = Field::Zero(m.NumNodes());
        for (int i = 0; i < m.NumNodes(); i++)
        {
          u[i] = std::sin(1.0 + 3.0 * i) * 0.7;
        }
        ops.Pin(u);
        const Field s = SourceVector(ops, u, k);
        const double e = 1e-6;
        for (int n : m.free_nodes)
        {
          Field up = u, um = u;
          up[n] += e;
          um[n] -= e;
          const double fd = (LkNormPow(ops, up, k) - LkNormPow(ops, um, k)) / (2 * e * k);
          CHECK(s[n] == doctest::Approx(fd).epsilon(1e-6).scale(1e-8));
        }
        for (int n : m.dirichlet_nodes)
        {
          CHECK(s[n] == 0.0);
        }
      }
    }
  }

  TEST_CASE("parameter validation")
  {
    PhysicalParams p;
    p.k_exp = 2.0;
    CHECK_THROWS_AS(ValidateParams(p, 1), Error);
    p.k_exp = 7.0;
    CHECK_NOTHROW(ValidateParams(p, 2));
    CHECK_THROWS_AS(ValidateParams(p, 3), Error);
    p.a = -1.0;
    p.b = -1.0;
    try
    {
      ValidateParams(p, 1);
      FAIL("expected failure");
    }
    catch (const Error &e)
    {
      const std::string msg = e.what();
      CHECK(msg.find("physics.a") != std::string::npos);
      CHECK(msg.find("physics.b") != std::string::npos);
    }
  }
}
