#include "dfrc/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace dfrc {

double ScenarioConfig::p() const
{
    return std::sqrt(e / Nt);
}

void ScenarioConfig::validate() const
{
    auto fail = [](const std::string & what) { throw ConfigError(what); };
    if (!(T > 0)) fail("scenario.slot_duration must be positive");
    if (!(fc > 0) || !(c > 0)) fail("scenario: carrier frequency and speed of light must be positive");
    if (Nt < 1 || Nr < 1 || M < 1) fail("array: antenna counts must be at least 1");
    for (double s : {sigmaTau, sigmaGamma, sigmaY, sigmaD, sigmaV, sigmaTheta, sigmaBeta,
                     priorSigmaD, priorSigmaTheta, priorSigmaV, priorSigmaBeta})
        if (!(s >= 0)) fail("noise: standard deviations must be non-negative");
    if (positions.empty()) fail("vehicles.positions must not be empty");
    for (const auto & p : positions)
        if (!(p[1] > 0)) fail("vehicles.positions: lateral offset must be positive");
    if (!(speedMin >= 0) || speedMax < speedMin) fail("vehicles.speed_range must satisfy 0 <= min <= max");
    if (!(d0 > 0)) fail("scenario.reference_distance must be positive");
    if (!(e > 0) || !(N0 > 0)) fail("power: e and n0 must be positive");
    if (mpIterations < 0) fail("tracker.mp_iterations must be non-negative");
    if (!(damping >= 0 && damping < 1)) fail("tracker.damping must lie in [0, 1)");
    if (pfParticles < 1) fail("tracker.pf_particles must be at least 1");
    if (!(feedbackNoiseFactor > 0)) fail("tracker.feedback_noise_factor must be positive");
    if (nSlots < 1 || nTrials < 1) fail("run: slots and trials must be at least 1");
    for (int n : beamwidthAntennas)
        if (n < 1) fail("run.beamwidth_antennas entries must be at least 1");
}

ScenarioConfig desk_preset()
{
    return ScenarioConfig{};
}

ScenarioConfig paper_preset()
{
    ScenarioConfig cfg;
    cfg.Nt = cfg.Nr = cfg.M = 64;
    cfg.nTrials = 1000;
    cfg.beamwidthAntennas = {16, 128};
    return cfg;
}

ScenarioConfig desk_fine_delay_preset()
{
    ScenarioConfig cfg;
    cfg.sigmaTau = 0.67e-9;
    return cfg;
}

ScenarioConfig preset(const std::string & name)
{
    if (name == "desk") return desk_preset();
    if (name == "paper") return paper_preset();
    if (name == "desk-fine-delay") return desk_fine_delay_preset();
    throw ConfigError("unknown preset '" + name + "'");
}

namespace {

std::string where(const YAML::Node & n, const std::string & key)
{
    std::ostringstream os;
    os << "line " << n.Mark().line + 1 << ", field '" << key << "'";
    return os.str();
}

template <typename T>
T as(const YAML::Node & n, const std::string & key)
{
    try
    {
        return n.as<T>();
    }
    catch (const YAML::Exception &)
    {
        throw ConfigError(where(n, key) + ": wrong type");
    }
}

using Setter = std::function<void(ScenarioConfig &, const YAML::Node &, const std::string &)>;

template <typename T>
Setter set(T ScenarioConfig::*field)
{
    return [field](ScenarioConfig & c, const YAML::Node & n, const std::string & k) { c.*field = as<T>(n, k); };
}

Setter setComplex(std::complex<double> ScenarioConfig::*field)
{
    return [field](ScenarioConfig & c, const YAML::Node & n, const std::string & k) {
        if (!n.IsSequence() || n.size() != 2)
            throw ConfigError(where(n, k) + ": expected [re, im]");
        c.*field = {as<double>(n[0], k), as<double>(n[1], k)};
    };
}

const std::map<std::string, std::map<std::string, Setter>> & schema()
{
    static const std::map<std::string, std::map<std::string, Setter>> s = {
        {"scenario",
         {{"carrier_frequency", set(&ScenarioConfig::fc)},
          {"speed_of_light", set(&ScenarioConfig::c)},
          {"slot_duration", set(&ScenarioConfig::T)},
          {"rcs", setComplex(&ScenarioConfig::xi)},
          {"pathloss_exponent", set(&ScenarioConfig::pathlossExponent)},
          {"reference_distance", set(&ScenarioConfig::d0)}}},
        {"array",
         {{"nt", set(&ScenarioConfig::Nt)}, {"nr", set(&ScenarioConfig::Nr)}, {"m", set(&ScenarioConfig::M)}}},
        {"power", {{"e", set(&ScenarioConfig::e)}, {"n0", set(&ScenarioConfig::N0)}}},
        {"noise",
         {{"sigma_tau", set(&ScenarioConfig::sigmaTau)},
          {"sigma_gamma", set(&ScenarioConfig::sigmaGamma)},
          {"sigma_y", set(&ScenarioConfig::sigmaY)},
          {"radar_ref_range", set(&ScenarioConfig::radarRefRange)},
          {"sigma_d", set(&ScenarioConfig::sigmaD)},
          {"sigma_v", set(&ScenarioConfig::sigmaV)},
          {"sigma_theta", set(&ScenarioConfig::sigmaTheta)},
          {"sigma_theta_deg",
           [](ScenarioConfig & c, const YAML::Node & n, const std::string & k) {
               c.sigmaTheta = as<double>(n, k) * std::numbers::pi / 180.0;
           }},
          {"sigma_beta", set(&ScenarioConfig::sigmaBeta)},
          {"truth_beta_noise", set(&ScenarioConfig::truthBetaNoise)},
          {"truth_speed_noise", set(&ScenarioConfig::truthSpeedNoise)}}},
        {"vehicles",
         {{"positions",
           [](ScenarioConfig & c, const YAML::Node & n, const std::string & k) {
               if (!n.IsSequence()) throw ConfigError(where(n, k) + ": expected a list of [x, y]");
               c.positions.clear();
               for (const auto & p : n)
               {
                   if (!p.IsSequence() || p.size() != 2)
                       throw ConfigError(where(p, k) + ": expected [x, y]");
                   c.positions.push_back({as<double>(p[0], k), as<double>(p[1], k)});
               }
           }},
          {"speed_range",
           [](ScenarioConfig & c, const YAML::Node & n, const std::string & k) {
               if (!n.IsSequence() || n.size() != 2) throw ConfigError(where(n, k) + ": expected [min, max]");
               c.speedMin = as<double>(n[0], k);
               c.speedMax = as<double>(n[1], k);
           }}}},
        {"prior",
         {{"sigma_d", set(&ScenarioConfig::priorSigmaD)},
          {"sigma_theta", set(&ScenarioConfig::priorSigmaTheta)},
          {"sigma_v", set(&ScenarioConfig::priorSigmaV)},
          {"sigma_beta", set(&ScenarioConfig::priorSigmaBeta)}}},
        {"tracker",
         {{"mp_iterations", set(&ScenarioConfig::mpIterations)},
          {"damping", set(&ScenarioConfig::damping)},
          {"doppler_every_sweep", set(&ScenarioConfig::dopplerEverySweep)},
          {"relaxed_schedule", set(&ScenarioConfig::relaxedSchedule)},
          {"pf_particles", set(&ScenarioConfig::pfParticles)},
          {"feedback_noise_factor", set(&ScenarioConfig::feedbackNoiseFactor)}}},
        {"run",
         {{"slots", set(&ScenarioConfig::nSlots)},
          {"trials", set(&ScenarioConfig::nTrials)},
          {"seed", set(&ScenarioConfig::seed)},
          {"threads", set(&ScenarioConfig::threads)},
          {"beamwidth_antennas", set(&ScenarioConfig::beamwidthAntennas)},
          {"high_speed_min", set(&ScenarioConfig::highSpeedMin)},
          {"low_speed_max", set(&ScenarioConfig::lowSpeedMax)},
          {"max_degenerate_fraction", set(&ScenarioConfig::maxDegenerateFraction)}}},
    };
    return s;
}

} // namespace

ScenarioConfig parse_config(const std::string & text, const ScenarioConfig & base)
{
    YAML::Node root;
    try
    {
        root = YAML::Load(text);
    }
    catch (const YAML::Exception & ex)
    {
        throw ConfigError("line " + std::to_string(ex.mark.line + 1) + ": " + ex.msg);
    }

    ScenarioConfig cfg = base;
    if (root.IsNull()) return cfg;
    if (!root.IsMap()) throw ConfigError("top level must be a mapping of sections");

    for (const auto & sec : root)
    {
        const std::string name = sec.first.as<std::string>();
        const auto it = schema().find(name);
        if (it == schema().end())
            throw ConfigError(where(sec.first, name) + ": unknown section");
        if (!sec.second.IsMap())
            throw ConfigError(where(sec.second, name) + ": expected a mapping");
        for (const auto & kv : sec.second)
        {
            const std::string key = kv.first.as<std::string>();
            const std::string full = name + "." + key;
            const auto f = it->second.find(key);
            if (f == it->second.end())
                throw ConfigError(where(kv.first, full) + ": unknown key");
            f->second(cfg, kv.second, full);
        }
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string & path, const ScenarioConfig & base)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), base);
}

} // namespace dfrc
