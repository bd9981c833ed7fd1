// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include "kwave/config.hpp"

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace kwave
{

using nlohmann::json;

namespace
{

std::string Join(const std::vector<std::string> &errors)
{
  std::ostringstream os;
  for (size_t i = 0; i < errors.size(); i++)
  {
    os << (i ? "; " : "") << errors[i];
  }
  return os.str();
}

const std::vector<std::string> kChecks{"hypotheses", "constants", "membership",
                                       "invariance", "identity",  "decay"};

// Reads the members of one JSON object, remembering which keys were consumed.
class Section
{
public:
  Section(const json &obj, std::string path, std::vector<std::string> &errors)
      : obj_(obj), path_(std::move(path)), errors_(errors)
  {
    if (!obj_.is_object())
    {
      errors_.push_back(Name("") + " must be an object");
      valid_ = false;
    }
  }

  bool Has(const std::string &key) const { return valid_ && obj_.contains(key); }

  const json *Raw(const std::string &key)
  {
    if (!Has(key))
    {
      return nullptr;
    }
    seen_.insert(key);
    return &obj_.at(key);
  }

  void Get(const std::string &key, double &out)
  {
    if (const json *v = Raw(key))
    {
      if (v->is_number())
      {
        out = v->get<double>();
      }
      else
      {
        errors_.push_back(Name(key) + " must be a number");
      }
    }
  }

  void Get(const std::string &key, int &out)
  {
    if (const json *v = Raw(key))
    {
      if (v->is_number_integer())
      {
        out = v->get<int>();
      }
      else
      {
        errors_.push_back(Name(key) + " must be an integer");
      }
    }
  }

  void Get(const std::string &key, std::uint64_t &out)
  {
    if (const json *v = Raw(key))
    {
      if (v->is_number_unsigned())
      {
        out = v->get<std::uint64_t>();
      }
      else
      {
        errors_.push_back(Name(key) + " must be a nonnegative integer");
      }
    }
  }

  void Get(const std::string &key, bool &out)
  {
    if (const json *v = Raw(key))
    {
      if (v->is_boolean())
      {
        out = v->get<bool>();
      }
      else
      {
        errors_.push_back(Name(key) + " must be a boolean");
      }
    }
  }

  void Get(const std::string &key, std::string &out)
  {
    if (const json *v = Raw(key))
    {
      if (v->is_string())
      {
        out = v->get<std::string>();
      }
      else
      {
        errors_.push_back(Name(key) + " must be a string");
      }
    }
  }

  void Get(const std::string &key, std::vector<std::string> &out)
  {
    if (const json *v = Raw(key))
    {
      if (v->is_array() && std::all_of(v->begin(), v->end(),
                                       [](const json &e) { return e.is_string(); }))
      {
        out = v->get<std::vector<std::string>>();
      }
      else
      {
        errors_.push_back(Name(key) + " must be an array of strings");
      }
    }
  }

  std::string Name(const std::string &key) const
  {
    if (key.empty())
    {
      return path_.empty() ? "config" : path_;
    }
    return path_.empty() ? key : path_ + "." + key;
  }

  // Reports every key that was never consumed.
  void Finish()
  {
    if (!valid_)
    {
      return;
    }
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
    {
      if (!seen_.count(it.key()))
      {
        errors_.push_back("unknown key '" + Name(it.key()) + "'");
      }
    }
  }

  std::vector<std::string> &errors() { return errors_; }

private:
  const json &obj_;
  std::string path_;
  std::vector<std::string> &errors_;
  std::set<std::string> seen_;
  bool valid_ = true;
};

template <typename Fn>
void WithSection(Section &parent, const std::string &key, Fn &&fn)
{
  if (const json *v = parent.Raw(key))
  {
    Section s(*v, parent.Name(key), parent.errors());
    fn(s);
    s.Finish();
  }
}

void ReadProfile(Section &parent, const std::string &key, Profile &p)
{
  WithSection(parent, key, [&](Section &s) {
    s.Get("profile", p.name);
    s.Get("amplitude", p.amplitude);
  });
}

void ReadDomain(Section &s, DomainSpec &d)
{
  s.Get("dimension", d.dimension);
  const int dim = std::clamp(d.dimension, 1, 2);
  if (const json *v = s.Raw("extent"))
  {
    if (v->is_array() && static_cast<int>(v->size()) == dim &&
        std::all_of(v->begin(), v->end(), [](const json &e) { return e.is_number(); }))
    {
      for (int i = 0; i < dim; i++)
      {
        d.extent[i] = (*v)[i].get<double>();
      }
    }
    else
    {
      s.errors().push_back(s.Name("extent") + " must be an array of " + std::to_string(dim) +
                           " numbers");
    }
  }
  if (const json *v = s.Raw("resolution"))
  {
    if (v->is_array() && static_cast<int>(v->size()) == dim &&
        std::all_of(v->begin(), v->end(), [](const json &e) { return e.is_number_integer(); }))
    {
      for (int i = 0; i < dim; i++)
      {
        d.resolution[i] = (*v)[i].get<int>();
      }
    }
    else
    {
      s.errors().push_back(s.Name("resolution") + " must be an array of " +
                           std::to_string(dim) + " integers");
    }
  }
  std::vector<std::string> faces;
  if (s.Has("gamma1"))
  {
    s.Get("gamma1", faces);
    d.gamma1_faces.clear();
    for (const std::string &f : faces)
    {
      try
      {
        d.gamma1_faces.push_back(FaceFromString(f));
      }
      catch (const Error &e)
      {
        s.errors().push_back(s.Name("gamma1") + ": " + e.what());
      }
    }
  }
}

void ReadPhysics(Section &s, PhysicalParams &p)
{
  s.Get("a", p.a);
  s.Get("b", p.b);
  s.Get("kappa", p.kappa);
  s.Get("k", p.k_exp);
  s.Get("p", p.p);
  s.Get("q", p.q);
  s.Get("source", p.source);
}

void ReadKernel(Section &s, KernelSpec &k)
{
  s.Get("family", k.family);
  s.Get("g0", k.g0);
  s.Get("alpha", k.alpha);
  s.Get("epsilon", k.epsilon);
}

void ReadStepping(Section &s, SteppingSpec &st)
{
  s.Get("dt", st.dt);
  s.Get("t_end", st.t_end);
  s.Get("record_every", st.record_every);
  std::string policy = ToString(st.storage.policy);
  s.Get("storage", policy);
  try
  {
    st.storage.policy = StoragePolicyFromString(policy);
  }
  catch (const Error &e)
  {
    s.errors().push_back(s.Name("storage") + ": " + e.what());
  }
  s.Get("stride", st.storage.stride);
  s.Get("truncate_rel", st.storage.truncate_rel);
  s.Get("path", st.path);
  s.Get("c_cfl", st.c_cfl);
}

void ReadAnalysis(Section &s, AnalysisSpec &a)
{
  s.Get("checks", a.checks);
  s.Get("t_tail", a.t_tail);
  s.Get("t0", a.t0);
  s.Get("s_count", a.s_count);
  s.Get("s_fraction", a.s_fraction);
  s.Get("tol_energy", a.tol_energy);
  s.Get("tol_identity", a.tol_identity);
  s.Get("hypothesis_horizon", a.hypothesis_horizon);
  s.Get("optimizer_starts", a.optimizer_starts);
  s.Get("optimizer_max_iterations", a.optimizer_max_iterations);
  s.Get("mms_profile", a.mms_profile);
  s.Get("mms_levels", a.mms_levels);
}

}  // namespace

ConfigError::ConfigError(ErrorCode code, std::vector<std::string> errors)
    : Error(code, Join(errors)), errors_(std::move(errors))
{
}

bool AnalysisSpec::Enabled(const std::string &check) const
{
  return std::find(checks.begin(), checks.end(), check) != checks.end();
}

ConvolutionPath ConvolutionPathFromString(const std::string &name)
{
  if (name == "auto")
  {
    return ConvolutionPath::Auto;
  }
  if (name == "recursive")
  {
    return ConvolutionPath::Recursive;
  }
  if (name == "quadrature")
  {
    return ConvolutionPath::Quadrature;
  }
  throw Error(ErrorCode::Validation,
              "unknown convolution path '" + name + "' (expected auto, recursive or quadrature)");
}

RelaxationKernel MakeKernel(const RunConfig &cfg)
{
  const KernelSpec &k = cfg.kernel;
  const double a = cfg.physics.a;
  if (k.family == "zero")
  {
    return RelaxationKernel::Zero(a);
  }
  const RateFamily fam = RateFamilyFromString(k.family);
  switch (fam)
  {
    case RateFamily::Constant:
      return BuildKernel(RateFunction::Constant(k.alpha), k.g0, a);
    case RateFamily::PowerLaw:
      return BuildKernel(RateFunction::PowerLaw(k.alpha), k.g0, a);
    case RateFamily::OscillatoryPerturbed:
      return BuildKernel(RateFunction::OscillatoryPerturbed(k.alpha, k.epsilon), k.g0, a);
  }
  throw Error(ErrorCode::Internal, "unhandled kernel family");
}

StepperConfig MakeStepperConfig(const RunConfig &cfg)
{
  StepperConfig sc;
  sc.dt = cfg.stepping.dt;
  sc.t_end = cfg.stepping.t_end;
  sc.record_every = cfg.stepping.record_every;
  sc.c_cfl = cfg.stepping.c_cfl;
  sc.storage = cfg.stepping.storage;
  sc.path = ConvolutionPathFromString(cfg.stepping.path);
  return sc;
}

void ValidateProfile(const Profile &profile, const std::string &field,
                     std::vector<std::string> &errors)
{
  static const std::vector<std::string> names{"zero", "linear", "sine", "bump"};
  if (std::find(names.begin(), names.end(), profile.name) == names.end())
  {
    errors.push_back(field + ".profile '" + profile.name +
                     "' is not one of zero, linear, sine, bump");
  }
  if (!std::isfinite(profile.amplitude))
  {
    errors.push_back(field + ".amplitude must be finite");
  }
}

void ValidateConfig(const RunConfig &cfg)
{
  std::vector<std::string> errors;
  auto collect = [&](auto &&fn) {
    try
    {
      fn();
    }
    catch (const Error &e)
    {
      errors.push_back(e.what());
    }
  };
  collect([&] { ValidateDomain(cfg.domain); });
  collect([&] { ValidateParams(cfg.physics, cfg.domain.dimension); });

  bool hypothesis = false;
  const KernelSpec &k = cfg.kernel;
  if (k.family != "zero")
  {
    bool family_ok = true;
    collect([&] {
      try
      {
        RateFamilyFromString(k.family);
      }
      catch (...)
      {
        family_ok = false;
        throw Error(ErrorCode::Validation, "kernel.family '" + k.family +
                                               "' is not one of constant, power_law, "
                                               "oscillatory, zero");
      }
    });
    if (!(k.g0 > 0.0))
    {
      errors.push_back("kernel.g0 must be positive");
    }
    if (!(k.alpha > 0.0))
    {
      errors.push_back("kernel.alpha must be positive");
    }
    if (!(k.epsilon >= 0.0 && k.epsilon < 1.0))
    {
      errors.push_back("kernel.epsilon must lie in [0, 1)");
    }
    if (family_ok && k.g0 > 0.0 && k.alpha > 0.0 && k.epsilon >= 0.0 && k.epsilon < 1.0 &&
        cfg.physics.a > 0.0)
    {
      try
      {
        MakeKernel(cfg);
      }
      catch (const Error &e)
      {
        errors.push_back(e.what());
        hypothesis = hypothesis || e.code() == ErrorCode::Hypothesis;
      }
    }
  }

  ValidateProfile(cfg.initial.displacement, "initial.displacement", errors);
  ValidateProfile(cfg.initial.velocity, "initial.velocity", errors);
  if (!std::isfinite(cfg.initial.y0))
  {
    errors.push_back("initial.y0 must be finite");
  }

  const SteppingSpec &st = cfg.stepping;
  if (!(st.dt > 0.0))
  {
    errors.push_back("stepping.dt must be positive");
  }
  if (!(st.t_end > 0.0))
  {
    errors.push_back("stepping.t_end must be positive");
  }
  if (st.record_every < 1)
  {
    errors.push_back("stepping.record_every must be at least 1");
  }
  if (st.storage.stride < 1)
  {
    errors.push_back("stepping.stride must be at least 1");
  }
  if (!(st.storage.truncate_rel > 0.0 && st.storage.truncate_rel < 1.0))
  {
    errors.push_back("stepping.truncate_rel must lie in (0, 1)");
  }
  if (!(st.c_cfl >= 0.0 && st.c_cfl <= 1.0))
  {
    errors.push_back("stepping.c_cfl must lie in [0, 1] (0 selects the default)");
  }
  collect([&] { ConvolutionPathFromString(st.path); });
  if (st.path == "recursive" && !(k.family == "constant" || k.family == "zero"))
  {
    errors.push_back("stepping.path 'recursive' needs an exponential or zero kernel");
  }
  if (cfg.physics.p <= 0.0 || cfg.physics.q <= 0.0)
  {
    errors.push_back("(H1) violated: physics.p and physics.q must be positive on Gamma1");
    hypothesis = true;
  }

  const AnalysisSpec &a = cfg.analysis;
  for (const std::string &c : a.checks)
  {
    if (std::find(kChecks.begin(), kChecks.end(), c) == kChecks.end())
    {
      errors.push_back("analysis.checks: unknown check '" + c + "'");
    }
  }
  if (!(a.t_tail >= 0.0))
  {
    errors.push_back("analysis.t_tail must be nonnegative");
  }
  if (a.s_count < 1)
  {
    errors.push_back("analysis.s_count must be at least 1");
  }
  if (!(a.s_fraction > 0.0 && a.s_fraction < 1.0))
  {
    errors.push_back("analysis.s_fraction must lie in (0, 1)");
  }
  if (!(a.tol_energy >= 0.0))
  {
    errors.push_back("analysis.tol_energy must be nonnegative");
  }
  if (!(a.tol_identity >= 0.0))
  {
    errors.push_back("analysis.tol_identity must be nonnegative");
  }
  if (!(a.hypothesis_horizon >= 0.0))
  {
    errors.push_back("analysis.hypothesis_horizon must be nonnegative");
  }
  if (a.optimizer_starts < 1)
  {
    errors.push_back("analysis.optimizer_starts must be at least 1");
  }
  if (a.optimizer_max_iterations < 1)
  {
    errors.push_back("analysis.optimizer_max_iterations must be at least 1");
  }
  if (a.mms_profile != "linear" && a.mms_profile != "sine")
  {
    errors.push_back("analysis.mms_profile must be linear or sine");
  }
  if (a.mms_levels < 2)
  {
    errors.push_back("analysis.mms_levels must be at least 2");
  }
  if (cfg.output_directory.empty())
  {
    errors.push_back("output.directory must not be empty");
  }
  if (!errors.empty())
  {
    throw ConfigError(hypothesis ? ErrorCode::Hypothesis : ErrorCode::Validation, errors);
  }
}

RunConfig ParseConfig(const std::string &text)
{
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (const json::parse_error &e)
  {
    throw ConfigError(ErrorCode::Parse, {std::string("syntax error: ") + e.what()});
  }

  RunConfig cfg;
  std::vector<std::string> errors;
  Section root(doc, "", errors);
  root.Get("name", cfg.name);
  root.Get("seed", cfg.seed);
  WithSection(root, "domain", [&](Section &s) { ReadDomain(s, cfg.domain); });
  WithSection(root, "physics", [&](Section &s) { ReadPhysics(s, cfg.physics); });
  WithSection(root, "kernel", [&](Section &s) { ReadKernel(s, cfg.kernel); });
  WithSection(root, "initial", [&](Section &s) {
    ReadProfile(s, "displacement", cfg.initial.displacement);
    ReadProfile(s, "velocity", cfg.initial.velocity);
    s.Get("y0", cfg.initial.y0);
  });
  WithSection(root, "stepping", [&](Section &s) { ReadStepping(s, cfg.stepping); });
  WithSection(root, "analysis", [&](Section &s) { ReadAnalysis(s, cfg.analysis); });
  WithSection(root, "output", [&](Section &s) { s.Get("directory", cfg.output_directory); });
  root.Finish();

  try
  {
    ValidateConfig(cfg);
  }
  catch (const ConfigError &e)
  {
    errors.insert(errors.end(), e.errors().begin(), e.errors().end());
    throw ConfigError(e.code(), errors);
  }
  if (!errors.empty())
  {
    throw ConfigError(ErrorCode::Validation, errors);
  }
  return cfg;
}

RunConfig LoadConfig(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw Error(ErrorCode::Io, "cannot open config file '" + path + "'");
  }
  std::ostringstream os;
  os << in.rdbuf();
  return ParseConfig(os.str());
}

std::string SerializeConfig(const RunConfig &cfg)
{
  const int dim = std::clamp(cfg.domain.dimension, 1, 2);
  json extent = json::array(), resolution = json::array(), faces = json::array();
  for (int i = 0; i < dim; i++)
  {
    extent.push_back(cfg.domain.extent[i]);
    resolution.push_back(cfg.domain.resolution[i]);
  }
  for (Face f : cfg.domain.gamma1_faces)
  {
    faces.push_back(ToString(f));
  }
  auto profile = [](const Profile &p) {
    return json{{"profile", p.name}, {"amplitude", p.amplitude}};
  };
  const AnalysisSpec &a = cfg.analysis;
  json doc = {
      {"name", cfg.name},
      {"seed", cfg.seed},
      {"domain",
       {{"dimension", cfg.domain.dimension},
        {"extent", extent},
        {"resolution", resolution},
        {"gamma1", faces}}},
      {"physics",
       {{"a", cfg.physics.a},
        {"b", cfg.physics.b},
        {"kappa", cfg.physics.kappa},
        {"k", cfg.physics.k_exp},
        {"p", cfg.physics.p},
        {"q", cfg.physics.q},
        {"source", cfg.physics.source}}},
      {"kernel",
       {{"family", cfg.kernel.family},
        {"g0", cfg.kernel.g0},
        {"alpha", cfg.kernel.alpha},
        {"epsilon", cfg.kernel.epsilon}}},
      {"initial",
       {{"displacement", profile(cfg.initial.displacement)},
        {"velocity", profile(cfg.initial.velocity)},
        {"y0", cfg.initial.y0}}},
      {"stepping",
       {{"dt", cfg.stepping.dt},
        {"t_end", cfg.stepping.t_end},
        {"record_every", cfg.stepping.record_every},
        {"storage", ToString(cfg.stepping.storage.policy)},
        {"stride", cfg.stepping.storage.stride},
        {"truncate_rel", cfg.stepping.storage.truncate_rel},
        {"path", cfg.stepping.path},
        {"c_cfl", cfg.stepping.c_cfl}}},
      {"analysis",
       {{"checks", a.checks},
        {"t_tail", a.t_tail},
        {"t0", a.t0},
        {"s_count", a.s_count},
        {"s_fraction", a.s_fraction},
        {"tol_energy", a.tol_energy},
        {"tol_identity", a.tol_identity},
        {"hypothesis_horizon", a.hypothesis_horizon},
        {"optimizer_starts", a.optimizer_starts},
        {"optimizer_max_iterations", a.optimizer_max_iterations},
        {"mms_profile", a.mms_profile},
        {"mms_levels", a.mms_levels}}},
      {"output", {{"directory", cfg.output_directory}}},
  };
  return doc.dump(2) + "\n";
}

Field EvaluateProfile(const Profile &profile, const Mesh &mesh)
{
  Field u = Field::Zero(mesh.NumNodes());
  if (profile.name == "zero" || profile.amplitude == 0.0)
  {
    return u;
  }
  const double pi = boost::math::constants::pi<double>();
  const auto &faces = mesh.spec.gamma1_faces;
  auto is_gamma0 = [&](Face f) {
    return std::find(faces.begin(), faces.end(), f) == faces.end();
  };
  const Face low[2] = {Face::Left, Face::Bottom};
  const Face high[2] = {Face::Right, Face::Top};

  for (int n = 0; n < mesh.NumNodes(); n++)
  {
    if (mesh.is_dirichlet[n])
    {
      continue;
    }
    double value = profile.amplitude;
    for (int d = 0; d < mesh.dimension; d++)
    {
      const double xi = mesh.nodes[n][d] / mesh.spec.extent[d];
      const bool g_lo = is_gamma0(low[d]), g_hi = is_gamma0(high[d]);
      double f = 1.0;
      if (g_lo && g_hi)
      {
        if (profile.name == "linear")
        {
          f = 1.0 - std::abs(2.0 * xi - 1.0);
        }
        else if (profile.name == "sine")
        {
          f = std::sin(pi * xi);
        }
        else
        {
          f = std::pow(std::sin(pi * xi), 2);
        }
      }
      else if (g_lo || g_hi)
      {
        const double s = g_lo ? xi : 1.0 - xi;
        if (profile.name == "linear")
        {
          f = s;
        }
        else if (profile.name == "sine")
        {
          f = std::sin(0.5 * pi * s);
        }
        else
        {
          f = std::pow(std::sin(pi * s), 2);
        }
      }
      value *= f;
    }
    u[n] = value;
  }
  return u;
}

}  // namespace kwave
