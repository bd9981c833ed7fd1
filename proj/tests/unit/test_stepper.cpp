// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include <array>
#include <cmath>

#include "doctest.h"
#include "kwave/error.hpp"
#include "kwave/stepper.hpp"

using namespace kwave;

namespace
{

struct Problem
{
  Mesh mesh;
  DiscreteOperators ops;
  PhysicalParams params;
  RelaxationKernel kernel = RelaxationKernel::Zero(1.0);

  Problem(int elements, bool source, double g0, double alpha)
  {
    DomainSpec d;
    d.resolution = {elements, 1};
    mesh = BuildMesh(d);
    params.a = 2.0;
    params.b = 1.0;
    params.kappa = 1.0;
    params.k_exp = 4.0;
    params.p = 1.0;
    params.q = 1.0;
    params.source = source;
    ops = Assemble(mesh, params);
    kernel = BuildKernel(RateFunction::Constant(alpha), g0, params.a);
  }

  Field Initial(double amp) const
  {
    Field u(mesh.NumNodes());
    for (int i = 0; i < mesh.NumNodes(); i++)
    {
      const double x = mesh.nodes[i][0];
      u[i] = amp * std::sin(M_PI * x / 2.0);
    }
    return u;
  }
};

// Semi-discrete system with the exponential memory written as W' = K u - alpha W:
//   M_L v' = -(a + b u.Ku) K u + g0 W + s(u) + w y_t e_Gamma1,  y_t = -(v_Gamma1 + q y) / p.
struct OdeState
{
  Field u, v, w;
  double y;
};

OdeState Rhs(const Problem &pb, const OdeState &s)
{
  const int n = pb.mesh.NumNodes();
  const int g = pb.mesh.gamma1_nodes[0];
  const double alpha = pb.kernel.rate().alpha();
  const Field ku = pb.ops.ApplyStiffness(s.u);
  const double m = pb.params.a + pb.params.b * s.u.dot(ku);
  Field f = -m * ku + pb.kernel.g0() * s.w;
  if (pb.params.source)
  {
    f += SourceVector(pb.ops, s.u, pb.params.k_exp);
  }
  pb.ops.Pin(f);
  const double yt = -(s.v[g] + pb.params.q * s.y) / pb.params.p;
  f[g] += pb.mesh.gamma1_weights[0] * yt;
  OdeState d{s.v, Field::Zero(n), ku - alpha * s.w, yt};
  for (int i : pb.mesh.free_nodes)
  {
    d.v[i] = f[i] / pb.ops.lumped_mass[i];
  }
  pb.ops.Pin(d.u);
  return d;
}

OdeState Axpy(const OdeState &s, double c, const OdeState &d)
{
  return {s.u + c * d.u, s.v + c * d.v, s.w + c * d.w, s.y + c * d.y};
}

OdeState Rk4(const Problem &pb, OdeState s, double t_end, int steps)
{
  const double h = t_end / steps;
  for (int i = 0; i < steps; i++)
  {
    const OdeState k1 = Rhs(pb, s);
    const OdeState k2 = Rhs(pb, Axpy(s, h / 2, k1));
    const OdeState k3 = Rhs(pb, Axpy(s, h / 2, k2));
    const OdeState k4 = Rhs(pb, Axpy(s, h, k3));
    s.u += h / 6 * (k1.u + 2 * k2.u + 2 * k3.u + k4.u);
    s.v += h / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v);
    s.w += h / 6 * (k1.w + 2 * k2.w + 2 * k3.w + k4.w);
    s.y += h / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
  }
  return s;
}

StepperConfig Config(double dt, double t_end)
{
  StepperConfig c;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

}  // namespace

TEST_SUITE("stepper")
{
  TEST_CASE("one step by hand on three nodes")
  {
    const Problem pb(2, false, 0.5, 1.0);
    const double dt = 0.01, g0 = 0.5, alpha = 1.0;
    Field u0(3), v0 = Field::Zero(3);
    u0 << 0.0, 0.05, 0.1;
    Simulation sim(pb.ops, pb.kernel, pb.params, Config(dt, 1.0), u0, v0,
                   BoundaryField::Zero(1));

    // K = 2 [[1,-1,0],[-1,2,-1],[0,-1,1]], lumped masses 0.5 and 0.25, unit boundary weight.
    auto stiff = [](const std::array<double, 3> &u) {
      return std::array<double, 3>{0.0, 2 * (-u[0] + 2 * u[1] - u[2]), 2 * (-u[1] + u[2])};
    };
    const std::array<double, 3> U0{0.0, 0.05, 0.1};
    const auto ku0 = stiff(U0);
    const double m0 = 2.0 + (U0[1] * ku0[1] + U0[2] * ku0[2]);
    const double a1 = -m0 * ku0[1] / 0.5;
    const double a2 = -m0 * ku0[2] / 0.25;  // y_t(0) = 0
    CHECK(sim.acceleration()[1] == doctest::Approx(a1).epsilon(1e-14));
    CHECK(sim.acceleration()[2] == doctest::Approx(a2).epsilon(1e-14));

    const double vh1 = 0.5 * dt * a1, vh2 = 0.5 * dt * a2;
    const std::array<double, 3> U1{0.0, U0[1] + dt * vh1, U0[2] + dt * vh2};
    const auto ku1 = stiff(U1);
    const double m1 = 2.0 + (U1[1] * ku1[1] + U1[2] * ku1[2]);
    // Piecewise-linear memory over one step: weights on K u(0) and K u(dt).
    const double beta = alpha * dt;
    const double wp = (1 - std::exp(-beta) * (1 + beta)) / (alpha * alpha * dt);
    const double wc = (1 - std::exp(-beta)) / alpha - wp;
    const double c1 = g0 * (wp * ku0[1] + wc * ku1[1]);
    const double c2 = g0 * (wp * ku0[2] + wc * ku1[2]);
    const double f1 = -m1 * ku1[1] + c1;
    const double f2 = -m1 * ku1[2] + c2;
    const double v1 = vh1 + 0.5 * dt * f1 / 0.5;
    // Boundary node: 0.25 V = 0.25 vh2 + dt/2 (f2 + Z), (1 + dt/2) Z = -V - Y0, Y0 = 0.
    const double P = 1.0 + 0.5 * dt;
    const double V = (0.25 * vh2 + 0.5 * dt * f2) / (0.25 + 0.5 * dt / P);
    const double Z = -V / P;
    const double Y = 0.5 * dt * Z;

    sim.Step();
    const SimState &s = sim.state();
    CHECK(s.t == doctest::Approx(dt));
    CHECK(s.u[0] == 0.0);
    CHECK(s.u[1] == doctest::Approx(U1[1]).epsilon(1e-14));
    CHECK(s.u[2] == doctest::Approx(U1[2]).epsilon(1e-14));
    CHECK(s.m_kir == doctest::Approx(m1).epsilon(1e-14));
    CHECK(s.v[1] == doctest::Approx(v1).epsilon(1e-14));
    CHECK(s.v[2] == doctest::Approx(V).epsilon(1e-14));
    CHECK(s.y[0] == doctest::Approx(Y).epsilon(1e-13));
    CHECK(sim.acceleration()[2] == doctest::Approx((f2 + Z) / 0.25).epsilon(1e-13));
  }

  TEST_CASE("second-order convergence to the semi-discrete solution")
  {
    const Problem pb(8, true, 0.5, 1.0);
    const Field u0 = pb.Initial(0.3);
    const Field v0 = Field::Zero(pb.mesh.NumNodes());
    const double T = 0.4;
    const OdeState ref = Rk4(pb, {u0, v0, Field::Zero(pb.mesh.NumNodes()), 0.0}, T, 4000);

    double prev = 0.0;
    for (int steps : {20, 40, 80})
    {
      Simulation sim(pb.ops, pb.kernel, pb.params, Config(T / steps, T), u0, v0,
                     BoundaryField::Zero(1));
      for (int i = 0; i < steps; i++)
      {
        sim.Step();
      }
      const double err = (sim.state().u - ref.u).lpNorm<Eigen::Infinity>() +
                         std::abs(sim.state().y[0] - ref.y);
      if (prev > 0.0)
      {
        const double ratio = prev / err;
        CHECK(ratio > 3.5);
        CHECK(ratio < 4.5);
      }
      prev = err;
    }
    CHECK(prev < 1e-4);
  }

  TEST_CASE("run records and the energy identity")
  {
    const Problem pb(32, true, 0.5, 1.0);
    StepperConfig c = Config(2e-3, 1.0);
    c.record_every = 5;
    const Field u0 = pb.Initial(0.3);
    const Trajectory tr = Run(pb.ops, pb.kernel, pb.params, c, u0,
                              Field::Zero(pb.mesh.NumNodes()), BoundaryField::Zero(1));
    CHECK(tr.records.size() == 101);
    CHECK(tr.records.back().state.t == doctest::Approx(1.0));
    const auto E = tr.Energies();
    for (size_t i = 1; i < E.size(); i++)
    {
      CHECK(E[i] <= E[i - 1] + 1e-6 * E[0]);
    }
    for (const auto &r : tr.Reports())
    {
      CHECK(r.rate_residual < 2e-3 * E[0]);
    }
  }

  TEST_CASE("configuration errors")
  {
    Problem pb(8, true, 0.5, 1.0);
    const Field u0 = pb.Initial(0.1);
    const Field v0 = Field::Zero(pb.mesh.NumNodes());
    const BoundaryField y0 = BoundaryField::Zero(1);
    auto code_of = [&](const PhysicalParams &p, const StepperConfig &c) {
      try
      {
        Simulation s(pb.ops, pb.kernel, p, c, u0, v0, y0);
      }
      catch (const Error &e)
      {
        return e.code();
      }
      return ErrorCode::Internal;
    };
    CHECK(code_of(pb.params, Config(0.0, 1.0)) == ErrorCode::Validation);
    CHECK(code_of(pb.params, Config(0.1, 1.0)) == ErrorCode::Cfl);
    PhysicalParams p = pb.params;
    p.p = 0.0;
    CHECK(code_of(p, Config(1e-3, 1.0)) == ErrorCode::Hypothesis);
    CHECK_THROWS_AS(Simulation(pb.ops, pb.kernel, pb.params, Config(1e-3, 1.0), u0, v0,
                               BoundaryField::Zero(2)),
                    Error);
  }

  TEST_CASE("blow-up aborts with the partial trajectory")
  {
    Problem pb(16, true, 0.5, 1.0);
    pb.params.b = 0.0;
    pb.params.k_exp = 6.0;
    pb.ops = Assemble(pb.mesh, pb.params);
    StepperConfig c = Config(1e-3, 20.0);
    c.c_cfl = 1.0;
    const Field u0 = pb.Initial(6.0);
    try
    {
      Run(pb.ops, pb.kernel, pb.params, c, u0, Field::Zero(pb.mesh.NumNodes()),
          BoundaryField::Zero(1));
      FAIL("expected an abort");
    }
    catch (const SimulationAbort &e)
    {
      CHECK((e.code() == ErrorCode::Blowup || e.code() == ErrorCode::Cfl));
      CHECK(e.time() < 20.0);
      CHECK_FALSE(e.partial().records.empty());
    }
  }
}
