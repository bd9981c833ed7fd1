// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "kwave/error.hpp"
#include "kwave/manufactured.hpp"

using namespace kwave;

TEST_SUITE("manufactured")
{
  TEST_CASE("separable solutions satisfy the acoustic pair at their own data")
  {
    DomainSpec d;
    d.resolution = {16, 1};
    PhysicalParams p;
    p.a = 2.0;
    for (const char *profile : {"linear", "sine"})
    {
      CAPTURE(profile);
      const ExactSolution ex = SeparableSolution1D(profile, d, p, 0.5);
      const Point x0{0.0, 0.0}, x1{1.0, 0.0};
      for (double t : {0.0, 0.3, 0.9})
      {
        CHECK(ex.u(x0, t) == doctest::Approx(0.0).scale(1.0));
        // u_t + p y_t + q y = 0 on Gamma1 up to the boundary forcing, which is smooth.
        CHECK(std::isfinite(ex.y(x1, t)));
        // Time derivatives agree with central differences.
        const double e = 1e-5;
        CHECK(ex.u_t(x1, t + 0.1) ==
              doctest::Approx((ex.u(x1, t + 0.1 + e) - ex.u(x1, t + 0.1 - e)) / (2 * e))
                  .epsilon(1e-6));
        CHECK(ex.y_t(x1, t + 0.1) ==
              doctest::Approx((ex.y(x1, t + 0.1 + e) - ex.y(x1, t + 0.1 - e)) / (2 * e))
                  .epsilon(1e-6));
      }
    }
    CHECK_THROWS_AS(SeparableSolution1D("cubic", d, p), Error);
  }

  TEST_CASE("second-order convergence on the linear profile")
  {
    DomainSpec d;
    d.resolution = {16, 1};
    PhysicalParams p;
    p.a = 2.0;
    const auto k = BuildKernel(RateFunction::Constant(1.0), 0.5, p.a);
    const ConvergenceStudy s = RunConvergenceStudy("linear", d, p, k, 0.02, 1.0, 3);
    REQUIRE(s.levels.size() == 3);
    CHECK(s.levels[1].resolution == 32);
    CHECK(s.levels[1].dt == doctest::Approx(0.01));
    CHECK(s.levels[0].ratio == 0.0);
    for (size_t i = 1; i < s.levels.size(); i++)
    {
      CHECK(s.levels[i].ratio == doctest::Approx(4.0).epsilon(0.1));
    }
    CHECK(s.min_ratio > 3.6);
  }

  TEST_CASE("memory kernels on the quadrature path converge too")
  {
    DomainSpec d;
    d.resolution = {16, 1};
    PhysicalParams p;
    p.a = 2.0;
    const auto k = BuildKernel(RateFunction::PowerLaw(2.0), 0.5, p.a);
    const ConvergenceStudy s = RunConvergenceStudy("sine", d, p, k, 0.02, 0.5, 3);
    CHECK(s.min_ratio > 3.5);
  }
}
