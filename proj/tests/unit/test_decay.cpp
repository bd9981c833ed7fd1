// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "kwave/decay.hpp"
#include "kwave/error.hpp"

using namespace kwave;

namespace
{

std::vector<double> Grid(double T, int n)
{
  std::vector<double> t(n + 1);
  for (int i = 0; i <= n; i++)
  {
    t[i] = T * i / n;
  }
  return t;
}

SampledEnergy Exponential(double rate, double T, int n)
{
  return SampleFromFunctions(
      Grid(T, n), [rate](double t) { return std::exp(-rate * t); }, [](double t) { return t; },
      [](double) { return 1.0; });
}

// E = (1 + t)^{-2} against phi = 2 ln(1 + t).
SampledEnergy Algebraic(double T, int n)
{
  return SampleFromFunctions(
      Grid(T, n), [](double t) { return 1.0 / ((1 + t) * (1 + t)); },
      [](double t) { return 2.0 * std::log1p(t); }, [](double t) { return 2.0 / (1 + t); });
}

}  // namespace

TEST_SUITE("decay")
{
  TEST_CASE("Martinez: hypothesis and conclusion hold")
  {
    const SampledEnergy se = Exponential(1.0, 30.0, 3000);
    MartinezOptions o;
    o.tail = std::exp(-30.0);
    const MartinezResult r = MartinezCheck(se, 0.0, 0.9, o);
    CHECK(r.hypothesis == Outcome::Pass);
    CHECK(r.conclusion == Outcome::Pass);
    CHECK(r.hypothesis_margin == doctest::Approx(0.1).epsilon(1e-3));
    CHECK(r.conclusion_margin >= 0.0);
  }

  TEST_CASE("Martinez: too large omega fails both")
  {
    const SampledEnergy se = Exponential(1.0, 30.0, 3000);
    MartinezOptions o;
    o.tail = std::exp(-30.0);
    const MartinezResult r = MartinezCheck(se, 0.0, 2.0, o);
    CHECK(r.hypothesis == Outcome::Fail);
    CHECK(r.conclusion == Outcome::Fail);
    CHECK(r.hypothesis_margin < 0.0);
    CHECK(ToString(r.conclusion) == "fail");
  }

  TEST_CASE("Martinez: slow decay without a tail is inconclusive")
  {
    const SampledEnergy se = SampleFromFunctions(
        Grid(10.0, 1000), [](double t) { return 1.0 / ((1 + t) * (1 + t)); },
        [](double t) { return t; }, [](double) { return 1.0; });
    const MartinezResult r = MartinezCheck(se, 0.0, 0.01);
    CHECK(r.hypothesis == Outcome::Inconclusive);
    CHECK(r.detail.find("closed-form tail") != std::string::npos);
  }

  TEST_CASE("Martinez: constant energy fails")
  {
    const SampledEnergy se = SampleFromFunctions(
        Grid(10.0, 1000), [](double) { return 1.0; }, [](double t) { return t; },
        [](double) { return 1.0; });
    const MartinezResult r = MartinezCheck(se, 0.0, 1.0);
    CHECK(r.hypothesis == Outcome::Fail);
    CHECK(r.conclusion == Outcome::Fail);
    // int_0^10 1 = 10 against the bound 1.
    CHECK(r.hypothesis_margin == doctest::Approx(-9.0));
  }

  TEST_CASE("Martinez with sigma > 0")
  {
    // E = (1 + t)^{-1}, phi = t, sigma = 1: int_S^inf E^2 = E(S) = E(0) E(S) / 1.
    const SampledEnergy se = SampleFromFunctions(
        Grid(200.0, 20000), [](double t) { return 1.0 / (1 + t); }, [](double t) { return t; },
        [](double) { return 1.0; });
    MartinezOptions o;
    o.tail = 1.0 / 201.0;
    const MartinezResult r = MartinezCheck(se, 1.0, 0.8, o);
    CHECK(r.hypothesis == Outcome::Pass);
    CHECK(r.conclusion == Outcome::Pass);
  }

  TEST_CASE("Martinez input errors")
  {
    const SampledEnergy se = Exponential(1.0, 5.0, 50);
    CHECK_THROWS_AS(MartinezCheck(se, 0.0, 0.0), Error);
    CHECK_THROWS_AS(MartinezCheck(se, -1.0, 1.0), Error);
    SampledEnergy bumpy = se;
    bumpy.E[10] += 0.1;
    try
    {
      MartinezCheck(bumpy, 0.0, 1.0);
      FAIL("expected a monotonicity error");
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::Validation);
    }
    MartinezOptions o;
    o.tol_E = 0.2;
    CHECK_NOTHROW(MartinezCheck(bumpy, 0.0, 1.0, o));
  }

  TEST_CASE("omega fit")
  {
    // E = e^{-2t}: (1 + 2t) / t is smallest at the horizon.
    const OmegaFit f = FitOmega(Exponential(2.0, 10.0, 1000));
    CHECK(f.omega_max == doctest::Approx(2.1));
    CHECK(f.attained_at == doctest::Approx(10.0));
    CHECK(f.holds);
    CHECK(f.sharp);
    CHECK_FALSE(f.trivial);

    // E = e^{1 - t} e^{-1} ... envelope with equality at every sample: E = e^{-t}, phi = t.
    const OmegaFit g = FitOmega(Exponential(1.0, 10.0, 1000));
    CHECK(g.omega_max == doctest::Approx(1.1));

    SampledEnergy zero = Exponential(1.0, 1.0, 10);
    for (double &e : zero.E)
    {
      e = 0.0;
    }
    CHECK(FitOmega(zero).trivial);
  }

  TEST_CASE("tail regressions")
  {
    const LinearFit a = TailRegressionPhi(Exponential(3.0, 10.0, 1000), 5.0);
    CHECK(a.slope == doctest::Approx(-3.0));
    CHECK(a.r2 == doctest::Approx(1.0));
    CHECK(a.n == 501);
    const LinearFit b = TailRegressionLogTime(Algebraic(50.0, 1000), 10.0);
    CHECK(b.slope == doctest::Approx(-2.0));
    const LinearFit c = FitLine({0, 1, 2, 3}, {1, 3, 5, 7});
    CHECK(c.slope == doctest::Approx(2.0));
    CHECK(c.intercept == doctest::Approx(1.0));
    CHECK(FitLine({1.0}, {1.0}).n == 1);
    CHECK_THROWS_AS(FitLine({1.0, 2.0}, {1.0}), Error);
  }

  TEST_CASE("weighted integral profile")
  {
    const double T = 20.0;
    const RhoProfile e = WeightedIntegralCheck(Exponential(1.0, T, 20000), {0.0, 1.0, 10.0});
    for (size_t i = 0; i < e.S.size(); i++)
    {
      CHECK(e.rho[i] == doctest::Approx(1.0 - std::exp(-(T - e.S[i]))).epsilon(1e-6));
    }
    CHECK(e.finite);
    CHECK_FALSE(e.violation);

    const RhoProfile p = WeightedIntegralCheck(Algebraic(T, 20000), {0.0, 2.0, 5.0});
    for (size_t i = 0; i < p.S.size(); i++)
    {
      const double r = (1 + p.S[i]) / (1 + T);
      CHECK(p.rho[i] == doctest::Approx(1.0 - r * r).epsilon(1e-6));
    }
    CHECK(p.max_rho == doctest::Approx(p.rho[0]));

    CHECK_THROWS_AS(WeightedIntegralCheck(Exponential(1.0, T, 100), {T}), Error);
  }

  TEST_CASE("S grid and relative change")
  {
    const auto g = MakeSGrid(2.0, 12.0, 6, 0.5);
    REQUIRE(g.size() == 6);
    CHECK(g.front() == doctest::Approx(2.0));
    CHECK(g.back() == doctest::Approx(7.0));
    CHECK(RelativeChange(2.0, 2.2) == doctest::Approx(0.1));
  }

  TEST_CASE("sample validation")
  {
    SampledEnergy se = Exponential(1.0, 1.0, 10);
    se.E[3] = -1.0;
    CHECK_THROWS_AS(ValidateSampledEnergy(se), Error);
    se = Exponential(1.0, 1.0, 10);
    se.phi[0] = 0.5;
    CHECK_THROWS_AS(ValidateSampledEnergy(se), Error);
    se = Exponential(1.0, 1.0, 10);
    se.xi.pop_back();
    CHECK_THROWS_AS(ValidateSampledEnergy(se), Error);
    const SampledEnergy half = Exponential(1.0, 10.0, 100).Truncate(5.0);
    CHECK(half.size() == 51);
    CHECK(half.Horizon() == doctest::Approx(5.0));
  }

  TEST_CASE("sampling from a rate function")
  {
    const auto rate = RateFunction::PowerLaw(2.0);
    const auto t = Grid(5.0, 50);
    std::vector<double> E(t.size(), 1.0);
    const SampledEnergy se = SampleFromRate(t, E, rate);
    CHECK(se.phi[50] == doctest::Approx(2.0 * std::log(6.0)));
    CHECK(se.xi[50] == doctest::Approx(2.0 / 6.0));
  }

  TEST_CASE("full analysis of an exponential decay")
  {
    const auto kernel = BuildKernel(RateFunction::Constant(1.0), 0.5, 1.0);
    const auto t = Grid(40.0, 4000);
    std::vector<double> E;
    for (double s : t)
    {
      E.push_back(std::exp(-0.5 * s));
    }
    const DecayReport r = AnalyzeDecay(SampleFromRate(t, E, kernel.rate()), kernel);
    CHECK(r.monotone);
    CHECK(r.tail_phi.slope == doctest::Approx(-0.5));
    CHECK(r.t_tail == doctest::Approx(20.0));
    CHECK(r.t0 == doctest::Approx(std::log(2.0)));
    CHECK(r.omega.omega_max == doctest::Approx(0.5 + 1.0 / 40.0));
    // rho = 2 (1 - e^{-(T - S) / 2}) is nearly 2 on [t0, T/2].
    CHECK(r.rho.max_rho == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(r.martinez.hypothesis != Outcome::Fail);
    CHECK(r.martinez.conclusion == Outcome::Pass);
    CHECK(r.omega_change < 0.05);
  }
}
