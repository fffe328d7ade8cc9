#include "dfrc/scenario.hpp"

#include <cmath>
#include <numbers>

namespace dfrc {

VehicleState step_truth(const VehicleState & s, const ScenarioConfig & cfg, CounterRng & rng)
{
    const double dd = s.v * cfg.T;
    VehicleState n = s;
    n.d = std::sqrt(s.d * s.d + dd * dd - 2.0 * s.d * dd * std::cos(s.theta));
    n.theta = s.theta + std::asin(dd * std::sin(s.theta) / n.d);
    if (!(n.theta > 0.0 && n.theta < std::numbers::pi))
        throw CoverageError();

    if (cfg.truthSpeedNoise)
        n.v = std::max(0.0, s.v + rng.normal(0.0, cfg.sigmaV));
    n.beta = s.beta * (s.d / n.d);
    if (cfg.truthBetaNoise)
        n.beta += rng.complexNormal(cfg.sigmaBeta * cfg.sigmaBeta);
    return n;
}

std::complex<double> reflection_coefficient(double d, std::complex<double> xi)
{
    if (!(d > 0.0))
        throw std::invalid_argument("range must be positive");
    return xi / (2.0 * d);
}

double pathloss(double d, const ScenarioConfig & cfg)
{
    d = std::max(d, cfg.d0);
    return std::pow(cfg.d0 / d, cfg.pathlossExponent / 2.0);
}

VehicleState initial_state(double x, double y, double v, std::complex<double> xi)
{
    VehicleState s;
    s.d = std::hypot(x, y);
    s.theta = std::atan2(y, x);
    s.v = v;
    s.beta = reflection_coefficient(s.d, xi);
    return s;
}

} // namespace dfrc
