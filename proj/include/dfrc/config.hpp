#ifndef DFRC_CONFIG_HPP
#define DFRC_CONFIG_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dfrc {

struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct ScenarioConfig
{
    // physics
    double fc = 30e9;
    double c = 3e8;
    double T = 0.02;
    std::complex<double> xi{10.0, 10.0};
    double pathlossExponent = 2.0;
    double d0 = 1.0;

    // arrays and power
    int Nt = 16;
    int Nr = 16;
    int M = 16;
    double e = 1.0;
    double N0 = 1e-5;

    // observation noise
    double sigmaTau = 0.67e-6;
    double sigmaGamma = 2e3;
    double sigmaY = 1.0;
    // Radar noise std scales with d/radarRefRange when > 0.
    double radarRefRange = 0.0;

    // process noise
    double sigmaD = 0.2;
    double sigmaV = 0.5;
    double sigmaTheta = 3.4906585039886591e-4;
    double sigmaBeta = 1.0;
    bool truthBetaNoise = false;
    bool truthSpeedNoise = true;

    // vehicles: initial (x, y) positions, travel along -x
    std::vector<std::array<double, 2>> positions{{100, 20}, {90, 20}, {80, 20}, {70, 20}};
    double speedMin = 5.0;
    double speedMax = 20.0;

    // prior spread around the truth at slot 0 (std)
    double priorSigmaD = 1.0;
    double priorSigmaTheta = 0.02;
    double priorSigmaV = 1.0;
    double priorSigmaBeta = 0.01;

    // trackers
    int mpIterations = 10;
    double damping = 0.0;
    bool dopplerEverySweep = false;
    // Secant-relaxed theta linearization across sweeps; false runs plain sweeps.
    bool relaxedSchedule = true;
    int pfParticles = 5000;
    double feedbackNoiseFactor = 64.0;

    // campaign
    int nSlots = 40;
    int nTrials = 200;
    std::uint64_t seed = 42;
    int threads = 0;
    std::vector<int> beamwidthAntennas{16, 128};
    double highSpeedMin = 15.0;
    double lowSpeedMax = 10.0;
    double maxDegenerateFraction = 0.5;

    int K() const { return static_cast<int>(positions.size()); }
    double p() const;

    void validate() const;
};

ScenarioConfig desk_preset();
ScenarioConfig paper_preset();
// desk preset with the delay std read as 0.67 ns
ScenarioConfig desk_fine_delay_preset();
ScenarioConfig preset(const std::string & name);

// Overlays a YAML document onto base. Throws ConfigError with line/field.
ScenarioConfig load_config(const std::string & path, const ScenarioConfig & base);
ScenarioConfig parse_config(const std::string & text, const ScenarioConfig & base);

} // namespace dfrc

#endif
