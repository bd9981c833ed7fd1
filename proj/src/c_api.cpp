// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include "kwave/kwave.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "kwave/scenario.hpp"

struct kwave_config
{
  kwave::RunConfig cfg;
};

struct kwave_sim
{
  kwave::Mesh mesh;
  kwave::DiscreteOperators ops;
  std::unique_ptr<kwave::Simulation> sim;
};

namespace
{

thread_local std::string g_last_error;

kwave_status Fail(kwave_status code, const std::string &msg)
{
  g_last_error = msg;
  return code;
}

template <typename Fn>
kwave_status Guard(Fn &&fn)
{
  try
  {
    fn();
    g_last_error.clear();
    return KWAVE_OK;
  }
  catch (const kwave::Error &e)
  {
    return Fail(static_cast<kwave_status>(e.code()), e.what());
  }
  catch (const std::bad_alloc &)
  {
    return Fail(KWAVE_ERR_INTERNAL, "out of memory");
  }
  catch (const std::exception &e)
  {
    return Fail(KWAVE_ERR_INTERNAL, e.what());
  }
  catch (...)
  {
    return Fail(KWAVE_ERR_INTERNAL, "unknown error");
  }
}

char *Duplicate(const std::string &s)
{
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out)
  {
    throw std::bad_alloc();
  }
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void RequireArg(bool ok, const char *what)
{
  kwave::Require(ok, kwave::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char *kwave_version(void)
{
  return "0.3.0";
}

const char *kwave_last_error(void)
{
  return g_last_error.c_str();
}

void kwave_string_free(char *s)
{
  std::free(s);
}

kwave_status kwave_config_parse(const char *text, kwave_config **out)
{
  return Guard([&] {
    RequireArg(text && out, "argument");
    *out = nullptr;
    auto c = std::make_unique<kwave_config>();
    c->cfg = kwave::ParseConfig(text);
    *out = c.release();
  });
}

kwave_status kwave_config_load(const char *path, kwave_config **out)
{
  return Guard([&] {
    RequireArg(path && out, "argument");
    *out = nullptr;
    auto c = std::make_unique<kwave_config>();
    c->cfg = kwave::LoadConfig(path);
    *out = c.release();
  });
}

kwave_status kwave_config_to_json(const kwave_config *cfg, char **out)
{
  return Guard([&] {
    RequireArg(cfg && out, "argument");
    *out = Duplicate(kwave::SerializeConfig(cfg->cfg));
  });
}

void kwave_config_free(kwave_config *cfg)
{
  delete cfg;
}

kwave_status kwave_sim_create(const kwave_config *cfg, kwave_sim **out)
{
  return Guard([&] {
    RequireArg(cfg && out, "argument");
    *out = nullptr;
    const kwave::RunConfig &rc = cfg->cfg;
    kwave::ValidateConfig(rc);
    auto s = std::make_unique<kwave_sim>();
    s->mesh = kwave::BuildMesh(rc.domain);
    s->ops = kwave::Assemble(s->mesh, rc.physics);
    const kwave::InitialData init = kwave::MakeInitialData(rc, s->ops);
    s->sim = std::make_unique<kwave::Simulation>(s->ops, kwave::MakeKernel(rc), rc.physics,
                                                 kwave::MakeStepperConfig(rc), init.u0,
                                                 init.u1, init.y0);
    *out = s.release();
  });
}

kwave_status kwave_sim_step(kwave_sim *sim, long steps)
{
  return Guard([&] {
    RequireArg(sim, "sim");
    kwave::Require(steps >= 0, kwave::ErrorCode::InvalidArgument, "steps must be nonnegative");
    for (long i = 0; i < steps; i++)
    {
      sim->sim->Step();
    }
  });
}

double kwave_sim_time(const kwave_sim *sim)
{
  return sim ? sim->sim->state().t : 0.0;
}

kwave_status kwave_sim_energy(const kwave_sim *sim, kwave_energy *out)
{
  return Guard([&] {
    RequireArg(sim && out, "argument");
    const kwave::EnergyReport e = sim->sim->Energy();
    *out = {e.t,        e.E,      e.kinetic,  e.elastic, e.kirchhoff,
            e.boundary, e.memory, e.source,   e.gamma_fn, e.rate_rhs};
  });
}

void kwave_sim_free(kwave_sim *sim)
{
  delete sim;
}

kwave_status kwave_run(const kwave_config *cfg, const char *outdir, char **json_out)
{
  return Guard([&] {
    RequireArg(cfg && json_out, "argument");
    *json_out = nullptr;
    const std::string dir = outdir ? outdir : cfg->cfg.output_directory;
    *json_out = Duplicate(kwave::RunScenario(cfg->cfg, dir));
  });
}

kwave_status kwave_constants(const kwave_config *cfg, char **json_out)
{
  return Guard([&] {
    RequireArg(cfg && json_out, "argument");
    *json_out = Duplicate(kwave::ComputeConstantsJson(cfg->cfg));
  });
}

kwave_status kwave_check_kernel(const kwave_config *cfg, char **json_out)
{
  return Guard([&] {
    RequireArg(cfg && json_out, "argument");
    *json_out = Duplicate(kwave::CheckKernelJson(cfg->cfg));
  });
}

kwave_status kwave_decay_report(const kwave_config *cfg, const char *csv_path, char **json_out)
{
  return Guard([&] {
    RequireArg(cfg && csv_path && json_out, "argument");
    *json_out = Duplicate(kwave::DecayReportFromCsv(cfg->cfg, csv_path));
  });
}

kwave_status kwave_mms(const kwave_config *cfg, char **json_out)
{
  return Guard([&] {
    RequireArg(cfg && json_out, "argument");
    *json_out = Duplicate(kwave::RunMmsJson(cfg->cfg));
  });
}

kwave_status kwave_sweep(const kwave_config *cfg, const double *amplitudes, size_t count,
                         const char *outdir, char **json_out)
{
  return Guard([&] {
    RequireArg(cfg && amplitudes && json_out, "argument");
    const std::string dir = outdir ? outdir : cfg->cfg.output_directory;
    *json_out = Duplicate(
        kwave::RunSweep(cfg->cfg, std::vector<double>(amplitudes, amplitudes + count), dir));
  });
}

}  // extern "C"
