#ifndef DFRC_SCENARIO_HPP
#define DFRC_SCENARIO_HPP

#include <complex>
#include <stdexcept>

#include "dfrc/config.hpp"
#include "dfrc/rng.hpp"

namespace dfrc {

struct CoverageError : std::runtime_error
{
    CoverageError()
        : std::runtime_error("vehicle left coverage")
    {}
};

struct VehicleState
{
    double d = 0.0;
    double theta = 0.0;
    double v = 0.0;
    std::complex<double> beta{};
};

// Exact kinematics over one slot for a vehicle moving along -x.
VehicleState step_truth(const VehicleState & s, const ScenarioConfig & cfg, CounterRng & rng);

std::complex<double> reflection_coefficient(double d, std::complex<double> xi);

// Amplitude gain (d0/d)^(exponent/2); d below d0 is clamped.
double pathloss(double d, const ScenarioConfig & cfg);

VehicleState initial_state(double x, double y, double v, std::complex<double> xi);

} // namespace dfrc

#endif
