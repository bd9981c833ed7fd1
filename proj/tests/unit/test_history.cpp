// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "kwave/error.hpp"
#include "kwave/history.hpp"

using namespace kwave;

namespace
{

Field Scalar(double v)
{
  Field f(1);
  f[0] = v;
  return f;
}

// A one-node history with K = 1 and u(s) = sin s, pushed on a uniform grid up to t.
HistoryBuffer SineHistory(const RelaxationKernel &k, double dt, int steps, ConvolutionPath path,
                          const StorageConfig &storage = {})
{
  HistoryBuffer h(k, 1, storage, path);
  for (int i = 0; i <= steps; i++)
  {
    const double s = i * dt;
    h.Push(s, Scalar(std::sin(s)), Scalar(std::sin(s)));
  }
  return h;
}

}  // namespace

TEST_SUITE("history")
{
  TEST_CASE("exponential step weights")
  {
    for (double alpha : {0.3, 1.0, 4.0})
    {
      for (double dt : {1e-6, 1e-4, 1e-2, 0.5})
      {
        const auto [w0, w1] = ExponentialStepWeights(alpha, dt);
        // w0 = int_0^dt e^{-alpha tau} tau / dt, w1 = int_0^dt e^{-alpha tau} (1 - tau / dt).
        const double b = alpha * dt;
        const double total = (1 - std::exp(-b)) / alpha;
        const double w0_ref = (1 - std::exp(-b) * (1 + b)) / (alpha * alpha * dt);
        CHECK(w0 + w1 == doctest::Approx(total).epsilon(1e-13));
        CHECK(w0 == doctest::Approx(w0_ref).epsilon(b < 1e-3 ? 1e-6 : 1e-12));
        CHECK(w0 > 0.0);
        CHECK(w1 > w0);
      }
    }
  }

  TEST_CASE("convolution against the closed form")
  {
    const auto k = BuildKernel(RateFunction::Constant(1.0), 1.0, 3.0);
    const double t = 5.0;
    // int_0^t e^{-(t-s)} sin s ds
    const double exact = (std::sin(t) - std::cos(t) + std::exp(-t)) / 2.0;
    for (ConvolutionPath path : {ConvolutionPath::Recursive, ConvolutionPath::Quadrature})
    {
      double prev_err = 0.0;
      for (int steps : {500, 1000, 2000})
      {
        const HistoryBuffer h = SineHistory(k, t / steps, steps, path);
        const double err = std::abs(h.ConvolutionForce(t)[0] - exact);
        CHECK(err < 1e-5);
        if (prev_err > 0.0)
        {
          CHECK(prev_err / err == doctest::Approx(4.0).epsilon(0.05));
        }
        prev_err = err;
      }
    }
  }

  TEST_CASE("recursive and quadrature paths agree")
  {
    const auto k = BuildKernel(RateFunction::Constant(2.0), 0.7, 3.0);
    const double dt = 1e-3;
    const int steps = 3000;
    const HistoryBuffer r = SineHistory(k, dt, steps, ConvolutionPath::Recursive);
    const HistoryBuffer q = SineHistory(k, dt, steps, ConvolutionPath::Quadrature);
    CHECK(r.Recursive());
    CHECK_FALSE(q.Recursive());
    CHECK(r.Retained() == 1);
    CHECK(q.Retained() == steps + 1);
    const double t = steps * dt;
    CHECK(r.ConvolutionForce(t)[0] == doctest::Approx(q.ConvolutionForce(t)[0]).epsilon(1e-6));
    const Field u = Scalar(std::sin(t));
    CHECK(r.GDiamond(u, u) == doctest::Approx(q.GDiamond(u, u)).epsilon(1e-6));
    CHECK(r.GPrimeDiamond(u, u) == doctest::Approx(q.GPrimeDiamond(u, u)).epsilon(1e-6));
  }

  TEST_CASE("g diamond against fine integration")
  {
    const auto k = BuildKernel(RateFunction::PowerLaw(2.5), 1.0, 3.0);
    const double t = 4.0;
    const int steps = 4000;
    const HistoryBuffer h = SineHistory(k, t / steps, steps, ConvolutionPath::Auto);
    CHECK_FALSE(h.Recursive());
    // Simpson with 20000 panels.
    auto f = [&](double s) {
      const double d = std::sin(t) - std::sin(s);
      return k.G(t - s) * d * d;
    };
    auto fp = [&](double s) {
      const double d = std::sin(t) - std::sin(s);
      return k.GPrime(t - s) * d * d;
    };
    const int n = 20000;
    double sg = f(0) + f(t), sp = fp(0) + fp(t);
    for (int i = 1; i < n; i++)
    {
      const double c = (i % 2) ? 4.0 : 2.0;
      sg += c * f(t * i / n);
      sp += c * fp(t * i / n);
    }
    sg *= t / (3 * n);
    sp *= t / (3 * n);
    const Field u = Scalar(std::sin(t));
    CHECK(h.GDiamond(u, u) == doctest::Approx(sg).epsilon(1e-5));
    CHECK(h.GPrimeDiamond(u, u) == doctest::Approx(sp).epsilon(1e-5));
  }

  TEST_CASE("strided retention")
  {
    const auto k = BuildKernel(RateFunction::PowerLaw(2.0), 0.5, 3.0);
    StorageConfig s;
    s.policy = StoragePolicy::Strided;
    s.stride = 4;
    const HistoryBuffer a = SineHistory(k, 0.1, 9, ConvolutionPath::Auto, s);
    CHECK(a.Pushed() == 10);
    CHECK(a.Retained() == 4);  // 0, 4, 8 and the latest 9
    CHECK(a.LastTime() == doctest::Approx(0.9));
    const HistoryBuffer b = SineHistory(k, 0.1, 8, ConvolutionPath::Auto, s);
    CHECK(b.Retained() == 3);
    const auto stamps = a.Stamps();
    CHECK(stamps[1] == doctest::Approx(0.4));
  }

  TEST_CASE("truncated retention")
  {
    const auto k = BuildKernel(RateFunction::Constant(1.0), 1.0, 3.0);
    StorageConfig s;
    s.policy = StoragePolicy::Truncated;
    s.truncate_rel = 1e-3;
    const HistoryBuffer h = SineHistory(k, 0.1, 200, ConvolutionPath::Quadrature, s);
    // g(tau) < 1e-3 g(0) beyond tau = ln 1000 = 6.91: about 70 steps plus one boundary sample.
    CHECK(h.Retained() >= 69);
    CHECK(h.Retained() <= 72);
    const HistoryBuffer full = SineHistory(k, 0.1, 200, ConvolutionPath::Quadrature);
    const double t = 20.0;
    CHECK(h.ConvolutionForce(t)[0] == doctest::Approx(full.ConvolutionForce(t)[0]).epsilon(2e-3));
  }

  TEST_CASE("errors")
  {
    const auto pl = BuildKernel(RateFunction::PowerLaw(2.0), 0.5, 3.0);
    CHECK_THROWS_AS(HistoryBuffer(pl, 1, {}, ConvolutionPath::Recursive), Error);
    StorageConfig bad;
    bad.stride = 0;
    CHECK_THROWS_AS(HistoryBuffer(pl, 1, bad), Error);
    HistoryBuffer h(pl, 1);
    h.Push(0.0, Scalar(1), Scalar(1));
    CHECK_THROWS_AS(h.Push(0.0, Scalar(1), Scalar(1)), Error);
    CHECK_THROWS_AS(h.ConvolutionForce(1.0), Error);
    CHECK(StoragePolicyFromString(ToString(StoragePolicy::Truncated)) == StoragePolicy::Truncated);
  }

  TEST_CASE("zero kernel contributes nothing")
  {
    const HistoryBuffer h = SineHistory(RelaxationKernel::Zero(1.0), 0.1, 10, ConvolutionPath::Auto);
    const Field u = Scalar(0.3);
    CHECK(h.ConvolutionForce(1.0)[0] == 0.0);
    CHECK(h.GDiamond(u, u) == 0.0);
  }
}
