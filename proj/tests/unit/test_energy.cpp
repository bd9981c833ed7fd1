// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "kwave/energy.hpp"
#include "kwave/error.hpp"

using namespace kwave;

namespace
{

struct Fixture
{
  Mesh mesh;
  DiscreteOperators ops;
  PhysicalParams params;

  Fixture()
  {
    DomainSpec d;
    d.resolution = {2, 1};
    mesh = BuildMesh(d);
    params.a = 2.0;
    params.b = 1.0;
    params.kappa = 1.0;
    params.k_exp = 4.0;
    params.p = 1.0;
    params.q = 1.0;
    ops = Assemble(mesh, params);
  }

  SimState State(double amp_u, double amp_v, double y) const
  {
    SimState s;
    s.u = Field(3);
    s.u << 0.0, 0.5 * amp_u, amp_u;
    s.v = Field(3);
    s.v << 0.0, 0.5 * amp_v, amp_v;
    s.y = BoundaryField::Constant(1, y);
    return s;
  }
};

}  // namespace

TEST_SUITE("energy")
{
  TEST_CASE("hand-computed energy of u = x, u_t = x, y = 1/2")
  {
    const Fixture f;
    const auto kernel = BuildKernel(RateFunction::Constant(1.0), 0.5, 2.0);
    SimState s = f.State(1.0, 1.0, 0.5);
    HistoryBuffer h(kernel, 3);
    h.Push(0.0, s.u, f.ops.ApplyStiffness(s.u));
    const EnergyReport e = ComputeEnergy(s, h, kernel, f.params, f.ops);
    // kinetic 1/6, elastic 1, Kirchhoff 1/4, boundary 1/8, memory 0, source -1/20.
    CHECK(e.kinetic == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(e.elastic == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.kirchhoff == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(e.boundary == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(e.memory == 0.0);
    CHECK(e.source == doctest::Approx(-0.05).epsilon(1e-14));
    CHECK(e.E == doctest::Approx(1.325 + 1.0 / 6.0).epsilon(1e-14));
    CHECK(e.E == doctest::Approx(e.ComponentSum()).epsilon(1e-15));
    // gamma^2 = l + b / (kappa + 1) + q y^2 = 1.5 + 0.5 + 0.25.
    CHECK(e.gamma_fn == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(ComputeGammaFn(s, h, kernel, f.params, f.ops) == doctest::Approx(1.5));
    // y_t = -(1 + 1/2); rate = -g(0)/2 ||grad u||^2 - p y_t^2.
    CHECK(e.rate_rhs == doctest::Approx(-0.25 - 2.25).epsilon(1e-14));
    CHECK(e.u_l2 == doctest::Approx(std::sqrt(1.0 / 3.0)));
    CHECK(e.grad_u_l2 == doctest::Approx(1.0));
  }

  TEST_CASE("small data: u = 0.1 x")
  {
    const Fixture f;
    const auto kernel = BuildKernel(RateFunction::Constant(1.0), 0.5, 2.0);
    SimState s = f.State(0.1, 0.0, 0.0);
    HistoryBuffer h(kernel, 3);
    h.Push(0.0, s.u, f.ops.ApplyStiffness(s.u));
    const EnergyReport e = ComputeEnergy(s, h, kernel, f.params, f.ops);
    // E = 0.01 + 1e-4 / 4 - 1e-4 / 20; gamma^2 = 1.5e-2 + 0.5e-4.
    CHECK(e.E == doctest::Approx(0.01002).epsilon(1e-13));
    CHECK(e.gamma_fn == doctest::Approx(std::sqrt(0.01505)).epsilon(1e-13));
  }

  TEST_CASE("Kirchhoff coefficient")
  {
    PhysicalParams p;
    p.a = 2.0;
    p.b = 3.0;
    p.kappa = 1.5;
    CHECK(KirchhoffCoefficient(p, 4.0) == doctest::Approx(2.0 + 3.0 * 8.0));
    p.kappa = 0.0;
    CHECK(KirchhoffCoefficient(p, 4.0) == doctest::Approx(5.0));
  }

  TEST_CASE("rate identity residual is exact on quadratics")
  {
    std::vector<double> t, e, r;
    for (int i = 0; i <= 10; i++)
    {
      const double s = 0.3 * i;
      t.push_back(s);
      e.push_back(2.0 - 0.5 * s + 0.25 * s * s);
      r.push_back(-0.5 + 0.5 * s);
    }
    for (double res : RateIdentityResidual(t, e, r))
    {
      CHECK(res == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    }
    e[5] += 0.03;
    const auto res = RateIdentityResidual(t, e, r);
    CHECK(res[4] == doctest::Approx(0.05));
    CHECK(res[6] == doctest::Approx(0.05));
    CHECK(res[5] == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  }

  TEST_CASE("rate identity input errors")
  {
    CHECK_THROWS_AS(RateIdentityResidual({0, 1}, {1, 1}, {0, 0}), Error);
    CHECK_THROWS_AS(RateIdentityResidual({0, 1, 3}, {1, 1, 1}, {0, 0, 0}), Error);
    CHECK_THROWS_AS(RateIdentityResidual({0, 1, 2}, {1, 1}, {0, 0, 0}), Error);
    std::vector<EnergyReport> two(2);
    FillRateResiduals(two);
    CHECK(std::isnan(two[0].rate_residual));
  }
}
