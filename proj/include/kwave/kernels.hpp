// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KWAVE_KERNELS_HPP
#define KWAVE_KERNELS_HPP

#include <string>
#include <vector>

namespace kwave
{

enum class RateFamily
{
  Constant,              // xi(t) = alpha
  PowerLaw,              // xi(t) = alpha / (1 + t)
  OscillatoryPerturbed,  // xi(t) = alpha (1 + eps e^{-t} sin t), 0 <= eps < 1
};

std::string ToString(RateFamily f);
RateFamily RateFamilyFromString(const std::string &name);

//
// Decay-rate function of a relaxation kernel. All quantities are closed form; each family
// also carries the certificates (theta, r) it claims for the integrability conditions and
// bounds that cover t beyond any finite sampling horizon.
//
class RateFunction
{
public:
  static RateFunction Constant(double alpha);
  static RateFunction PowerLaw(double alpha);
  static RateFunction OscillatoryPerturbed(double alpha, double eps);

  RateFamily family() const { return family_; }
  double alpha() const { return alpha_; }
  double epsilon() const { return eps_; }

  double Xi(double t) const;
  double XiPrime(double t) const;
  // Phi(t) = int_0^t xi(s) ds.
  double Phi(double t) const;

  double ClaimedTheta() const { return 0.0; }
  double ClaimedR() const;

  // sup of xi over [h, inf) and inf of xi over [h, inf).
  double TailSup(double h) const;
  double TailInf(double h) const;
  // Upper bound of xi(t') / xi(t) over h <= t <= t'.
  double TailRatioBound(double h) const;
  // Upper bound of int_h^inf |xi'| / xi^theta.
  double TailXiPrimeIntegral(double h, double theta) const;

  bool operator==(const RateFunction &) const = default;

private:
  RateFunction(RateFamily f, double alpha, double eps) : family_(f), alpha_(alpha), eps_(eps) {}

  RateFamily family_ = RateFamily::Constant;
  double alpha_ = 1.0;
  double eps_ = 0.0;
};

//
// Relaxation kernel g(t) = g0 exp(-Phi(t)), which saturates g' = -xi g. The memory-free
// kernel g = 0 is available for reduced reference models.
//
class RelaxationKernel
{
public:
  static RelaxationKernel Zero(double a);

  double g0() const { return g0_; }
  double a() const { return a_; }
  const RateFunction &rate() const { return rate_; }
  double TailMass() const { return tail_mass_; }
  double L() const { return a_ - tail_mass_; }
  bool IsZero() const { return zero_; }
  // Pure exponential: admits an exact recursive convolution update.
  bool FastPath() const { return zero_ || rate_.family() == RateFamily::Constant; }

  double G(double t) const;
  double GPrime(double t) const;
  // int_0^t g(s) ds.
  double Integral(double t) const;

private:
  friend RelaxationKernel BuildKernel(const RateFunction &, double, double);
  RelaxationKernel(const RateFunction &rate, double g0, double a)
      : rate_(rate), g0_(g0), a_(a)
  {
  }

  RateFunction rate_ = RateFunction::Constant(1.0);
  double g0_ = 0.0;
  double a_ = 1.0;
  double tail_mass_ = 0.0;
  bool zero_ = false;
};

// Throws Error(Hypothesis) when l = a - int_0^inf g <= 0 or the tail mass is infinite.
RelaxationKernel BuildKernel(const RateFunction &rate, double g0, double a);

// int_0^{t0} g(s) ds.
double TailFrom(const RelaxationKernel &kernel, double t0);

// Time t0 with int_0^{t0} g = fraction * tail mass.
double TimeForMassFraction(const RelaxationKernel &kernel, double fraction);

struct BoundaryCoefficients
{
  double p = 1.0;
  double q = 1.0;
};

struct Verdict
{
  std::string name;  // hypothesis label, e.g. "(H1)"
  bool pass = false;
  std::string detail;
};

struct HypothesisReport
{
  std::vector<Verdict> verdicts;
  double theta = 0.0;
  double r = 0.0;
  double exp_r = 1.0;
  double l = 0.0;
  double xi_sup = 0.0;
  double xi_prime_l1 = 0.0;  // ||xi' / xi^theta||_1 including the analytic tail
  double max_g_identity_error = 0.0;
  double horizon = 0.0;
  int grid_points = 0;

  bool AllPass() const;
  const Verdict *Find(const std::string &name) const;
};

// Samples every hypothesis on a uniform + geometric grid over [0, horizon] and closes the
// unbounded tail with the family's analytic bounds. Failures are verdicts, not errors.
HypothesisReport ValidateHypotheses(const RelaxationKernel &kernel,
                                    const BoundaryCoefficients &coeffs, double horizon);

// Composite check grid used by ValidateHypotheses.
std::vector<double> CheckGrid(double horizon, int uniform = 4000, int geometric = 200);

}  // namespace kwave

#endif  // KWAVE_KERNELS_HPP
