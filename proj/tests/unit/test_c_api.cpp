// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "kwave/kwave.h"

namespace
{

const char *kSmall = R"({
  "domain": {"resolution": [16]},
  "physics": {"a": 2},
  "kernel": {"g0": 1, "alpha": 1},
  "initial": {"displacement": {"profile": "sine", "amplitude": 0.3}},
  "stepping": {"dt": 0.005, "t_end": 4, "record_every": 5}
})";

std::string Take(char *s)
{
  std::string out = s ? s : "";
  kwave_string_free(s);
  return out;
}

}  // namespace

TEST_SUITE("c_api")
{
  TEST_CASE("version and error reporting")
  {
    CHECK(std::strlen(kwave_version()) > 0);
    kwave_config *cfg = nullptr;
    CHECK(kwave_config_parse("{\"stepping\": {\"dt\": 0}}", &cfg) == KWAVE_ERR_VALIDATION);
    CHECK(cfg == nullptr);
    CHECK(std::string(kwave_last_error()).find("stepping.dt must be positive") !=
          std::string::npos);
    CHECK(kwave_config_parse("{", &cfg) == KWAVE_ERR_PARSE);
    CHECK(kwave_config_parse("{\"kernel\": {\"g0\": 5}}", &cfg) == KWAVE_ERR_HYPOTHESIS);
    CHECK(kwave_config_parse(nullptr, &cfg) == KWAVE_ERR_INVALID_ARGUMENT);
    CHECK(kwave_config_load("/nonexistent.json", &cfg) == KWAVE_ERR_IO);
    CHECK(kwave_config_parse("{}", &cfg) == KWAVE_OK);
    CHECK(std::string(kwave_last_error()).empty());
    kwave_config_free(cfg);
    kwave_config_free(nullptr);
    kwave_sim_free(nullptr);
  }

  TEST_CASE("config round trip")
  {
    kwave_config *cfg = nullptr;
    REQUIRE(kwave_config_parse(kSmall, &cfg) == KWAVE_OK);
    char *text = nullptr;
    REQUIRE(kwave_config_to_json(cfg, &text) == KWAVE_OK);
    const std::string json = Take(text);
    kwave_config *again = nullptr;
    REQUIRE(kwave_config_parse(json.c_str(), &again) == KWAVE_OK);
    char *text2 = nullptr;
    REQUIRE(kwave_config_to_json(again, &text2) == KWAVE_OK);
    CHECK(Take(text2) == json);
    kwave_config_free(again);
    kwave_config_free(cfg);
  }

  TEST_CASE("stepwise simulation dissipates energy")
  {
    kwave_config *cfg = nullptr;
    REQUIRE(kwave_config_parse(kSmall, &cfg) == KWAVE_OK);
    kwave_sim *sim = nullptr;
    REQUIRE(kwave_sim_create(cfg, &sim) == KWAVE_OK);
    kwave_energy e0{}, e1{};
    REQUIRE(kwave_sim_energy(sim, &e0) == KWAVE_OK);
    CHECK(e0.t == 0.0);
    CHECK(e0.E > 0.0);
    CHECK(e0.E == doctest::Approx(e0.kinetic + e0.elastic + e0.kirchhoff + e0.boundary +
                                  e0.memory + e0.source));
    REQUIRE(kwave_sim_step(sim, 200) == KWAVE_OK);
    CHECK(kwave_sim_time(sim) == doctest::Approx(1.0));
    REQUIRE(kwave_sim_energy(sim, &e1) == KWAVE_OK);
    CHECK(e1.E < e0.E);
    CHECK(e1.gamma_fn > 0.0);
    CHECK(kwave_sim_step(sim, -1) == KWAVE_ERR_INVALID_ARGUMENT);
    kwave_sim_free(sim);
    kwave_config_free(cfg);
  }

  TEST_CASE("drivers")
  {
    kwave_config *cfg = nullptr;
    REQUIRE(kwave_config_parse(kSmall, &cfg) == KWAVE_OK);
    const std::string dir = (std::filesystem::current_path() / "c_api_out").string();
    std::filesystem::remove_all(dir);
    char *out = nullptr;
    REQUIRE(kwave_run(cfg, dir.c_str(), &out) == KWAVE_OK);
    CHECK(Take(out).find("\"verdicts\"") != std::string::npos);
    REQUIRE(kwave_constants(cfg, &out) == KWAVE_OK);
    CHECK(Take(out).find("\"S_k\"") != std::string::npos);
    REQUIRE(kwave_check_kernel(cfg, &out) == KWAVE_OK);
    CHECK(Take(out).find("\"all_pass\": true") != std::string::npos);
    const std::string csv = dir + "/trajectory.csv";
    REQUIRE(kwave_decay_report(cfg, csv.c_str(), &out) == KWAVE_OK);
    CHECK(Take(out).find("\"omega_max\"") != std::string::npos);
    CHECK(kwave_decay_report(cfg, "/nonexistent.csv", &out) == KWAVE_ERR_IO);
    // The half-mass start ln 2 lies beyond half of a unit horizon.
    kwave_config *short_cfg = nullptr;
    REQUIRE(kwave_config_parse(R"({"kernel": {"g0": 0.5}, "stepping": {"t_end": 1}})", &short_cfg) ==
            KWAVE_OK);
    const std::string short_dir = dir + "/short";
    REQUIRE(kwave_run(short_cfg, short_dir.c_str(), &out) == KWAVE_OK);
    kwave_string_free(out);
    CHECK(kwave_decay_report(short_cfg, (short_dir + "/trajectory.csv").c_str(), &out) ==
          KWAVE_ERR_VALIDATION);
    CHECK(std::string(kwave_last_error()).find("t0") != std::string::npos);
    kwave_config_free(short_cfg);
    REQUIRE(kwave_mms(cfg, &out) == KWAVE_OK);
    CHECK(Take(out).find("\"min_ratio\"") != std::string::npos);
    const double amps[] = {0.1, 0.2};
    REQUIRE(kwave_sweep(cfg, amps, 2, (dir + "/sweep").c_str(), &out) == KWAVE_OK);
    CHECK(Take(out).find("\"scenarios\"") != std::string::npos);
    CHECK(kwave_constants(nullptr, &out) == KWAVE_ERR_INVALID_ARGUMENT);
    kwave_config_free(cfg);
  }
}
