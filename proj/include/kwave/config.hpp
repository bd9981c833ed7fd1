// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KWAVE_CONFIG_HPP
#define KWAVE_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "kwave/assembly.hpp"
#include "kwave/error.hpp"
#include "kwave/geometry.hpp"
#include "kwave/history.hpp"
#include "kwave/kernels.hpp"
#include "kwave/stepper.hpp"

namespace kwave
{

struct KernelSpec
{
  std::string family = "constant";  // constant | power_law | oscillatory | zero
  double g0 = 0.5;
  double alpha = 1.0;
  double epsilon = 0.0;

  bool operator==(const KernelSpec &) const = default;
};

// Closed-form profile: zero | linear | sine | bump, scaled by amplitude.
struct Profile
{
  std::string name = "zero";
  double amplitude = 0.0;

  bool operator==(const Profile &) const = default;
};

struct InitialSpec
{
  Profile displacement{"sine", 0.1};
  Profile velocity;
  double y0 = 0.0;

  bool operator==(const InitialSpec &) const = default;
};

struct SteppingSpec
{
  double dt = 1e-3;
  double t_end = 10.0;
  int record_every = 10;
  StorageConfig storage;
  std::string path = "auto";  // auto | recursive | quadrature
  double c_cfl = 0.0;

  bool operator==(const SteppingSpec &) const = default;
};

struct AnalysisSpec
{
  std::vector<std::string> checks{"hypotheses", "constants", "membership",
                                  "invariance", "identity",  "decay"};
  double t_tail = 0.0;  // 0: half the horizon
  double t0 = -1.0;     // < 0: time at which int_0^t0 g reaches half the tail mass
  int s_count = 20;
  double s_fraction = 0.5;
  // tol_E = tol_energy * (dt^2 + h^2) * E(0); identity bound tol_identity (D^2 + h^2) E(0)
  // with D the record interval.
  double tol_energy = 1.0;
  double tol_identity = 4.0;
  double hypothesis_horizon = 0.0;  // 0: stepping.t_end
  int optimizer_starts = 8;
  int optimizer_max_iterations = 5000;
  std::string mms_profile = "linear";
  int mms_levels = 3;

  bool Enabled(const std::string &check) const;
  bool operator==(const AnalysisSpec &) const = default;
};

struct RunConfig
{
  std::string name = "scenario";
  DomainSpec domain;
  PhysicalParams physics;
  KernelSpec kernel;
  InitialSpec initial;
  SteppingSpec stepping;
  AnalysisSpec analysis;
  std::string output_directory = "out";
  std::uint64_t seed = 20240917;

  bool operator==(const RunConfig &) const = default;
};

// Carries every problem found while parsing or validating a config.
class ConfigError : public Error
{
public:
  ConfigError(ErrorCode code, std::vector<std::string> errors);
  const std::vector<std::string> &errors() const { return errors_; }

private:
  std::vector<std::string> errors_;
};

// Parses JSON text, fills defaults, rejects unknown keys and validates every section.
// Throws ConfigError (code Parse for syntax errors, Validation or Hypothesis otherwise).
RunConfig ParseConfig(const std::string &text);
RunConfig LoadConfig(const std::string &path);
std::string SerializeConfig(const RunConfig &cfg);

// Throws ConfigError listing every violation.
void ValidateConfig(const RunConfig &cfg);

RelaxationKernel MakeKernel(const RunConfig &cfg);
StepperConfig MakeStepperConfig(const RunConfig &cfg);
ConvolutionPath ConvolutionPathFromString(const std::string &name);

// Evaluates a profile on the mesh; zero on Gamma0. Per axis the factor is
//   Gamma0 on one side:   linear s, sine sin(pi s / 2), bump sin^2(pi s)
//   Gamma0 on both sides: linear 1 - |2 s - 1|, sine sin(pi s), bump sin^2(pi s)
//   no Gamma0 side:       1
// with s in [0, 1] measured from the Gamma0 side.
Field EvaluateProfile(const Profile &profile, const Mesh &mesh);

void ValidateProfile(const Profile &profile, const std::string &field,
                     std::vector<std::string> &errors);

}  // namespace kwave

#endif  // KWAVE_CONFIG_HPP
