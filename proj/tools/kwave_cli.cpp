// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "kwave/kwave.h"

namespace
{

struct Owned
{
  kwave_config *cfg = nullptr;
  ~Owned() { kwave_config_free(cfg); }
};

int Report(kwave_status st, const char *what)
{
  if (st != KWAVE_OK)
  {
    std::cerr << "kwave " << what << ": error " << static_cast<int>(st) << ": "
              << kwave_last_error() << "\n";
  }
  return static_cast<int>(st);
}

// Prints (or saves) a JSON document and releases it.
int Emit(kwave_status st, char *json, const std::string &out_file, const char *what)
{
  if (st == KWAVE_OK && json)
  {
    if (out_file.empty())
    {
      std::cout << json;
    }
    else
    {
      std::ofstream out(out_file, std::ios::binary);
      if (!out)
      {
        kwave_string_free(json);
        std::cerr << "kwave " << what << ": cannot write '" << out_file << "'\n";
        return KWAVE_ERR_IO;
      }
      out << json;
    }
  }
  kwave_string_free(json);
  return Report(st, what);
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Viscoelastic Kirchhoff wave solver with acoustic boundary conditions"};
  app.set_version_flag("--version", std::string(kwave_version()));
  app.require_subcommand(1);

  std::string config, outdir, out_file, csv;
  std::vector<double> amplitudes;

  auto *run = app.add_subcommand("run", "simulate a scenario and write every artifact");
  run->add_option("config", config, "scenario config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--outdir", outdir, "output directory (default: output.directory)");

  auto *constants = app.add_subcommand("constants", "estimate the potential-well constants");
  constants->add_option("config", config)->required()->check(CLI::ExistingFile);
  constants->add_option("-o,--output", out_file, "write the JSON here instead of stdout");

  auto *check = app.add_subcommand("check-kernel", "validate the kernel hypotheses");
  check->add_option("config", config)->required()->check(CLI::ExistingFile);
  check->add_option("-o,--output", out_file);

  auto *decay = app.add_subcommand("decay-report", "decay analysis of a trajectory CSV");
  decay->add_option("config", config, "config that produced the trajectory")
      ->required()
      ->check(CLI::ExistingFile);
  decay->add_option("csv", csv, "trajectory CSV")->required()->check(CLI::ExistingFile);
  decay->add_option("-o,--output", out_file);

  auto *mms = app.add_subcommand("mms", "manufactured-solution convergence ladder");
  mms->add_option("config", config)->required()->check(CLI::ExistingFile);
  mms->add_option("-o,--output", out_file);

  auto *sweep = app.add_subcommand("sweep", "run one scenario per displacement amplitude");
  sweep->add_option("config", config)->required()->check(CLI::ExistingFile);
  sweep->add_option("-a,--amplitudes", amplitudes, "displacement amplitudes")
      ->required()
      ->delimiter(',');
  sweep->add_option("-o,--outdir", outdir);

  CLI11_PARSE(app, argc, argv);

  Owned owned;
  if (const int rc = Report(kwave_config_load(config.c_str(), &owned.cfg), "config"))
  {
    return rc;
  }
  const char *dir = outdir.empty() ? nullptr : outdir.c_str();
  char *json = nullptr;

  if (*run)
  {
    const kwave_status st = kwave_run(owned.cfg, dir, &json);
    return Emit(st, json, "", "run");
  }
  if (*constants)
  {
    const kwave_status st = kwave_constants(owned.cfg, &json);
    return Emit(st, json, out_file, "constants");
  }
  if (*check)
  {
    const kwave_status st = kwave_check_kernel(owned.cfg, &json);
    return Emit(st, json, out_file, "check-kernel");
  }
  if (*decay)
  {
    const kwave_status st = kwave_decay_report(owned.cfg, csv.c_str(), &json);
    return Emit(st, json, out_file, "decay-report");
  }
  if (*mms)
  {
    const kwave_status st = kwave_mms(owned.cfg, &json);
    return Emit(st, json, out_file, "mms");
  }
  const kwave_status st =
      kwave_sweep(owned.cfg, amplitudes.data(), amplitudes.size(), dir, &json);
  return Emit(st, json, "", "sweep");
}
