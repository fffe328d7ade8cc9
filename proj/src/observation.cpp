#include "dfrc/observation.hpp"

#include <cmath>
#include <numbers>

namespace dfrc {

namespace {
constexpr double pi = std::numbers::pi;
}

Eigen::VectorXcd steering(double theta, int N)
{
    Eigen::VectorXcd a(N);
    const double u = std::cos(theta);
    const double s = 1.0 / std::sqrt(static_cast<double>(N));
    for (int i = 0; i < N; ++i)
        a(i) = std::polar(s, -pi * i * u);
    return a;
}

std::complex<double> array_gain(double x, int N)
{
    // direct sum keeps the x -> 0 limit exact
    std::complex<double> g{0.0, 0.0};
    for (int i = 0; i < N; ++i)
        g += std::polar(1.0, pi * i * x);
    return g;
}

Eigen::VectorXcd array_response(std::complex<double> beta, double theta, double thetaPredRsu,
                                int Nt, int Nr, double p)
{
    const double u = std::cos(theta);
    const std::complex<double> g = beta * p * array_gain(std::cos(thetaPredRsu) - u, Nt);
    Eigen::VectorXcd y(Nr);
    for (int l = 0; l < Nr; ++l)
        y(l) = g * std::polar(1.0, pi * l * u);
    return y;
}

double delay_sigma(double d, const ScenarioConfig & cfg)
{
    return cfg.radarRefRange > 0.0 ? cfg.sigmaTau * d / cfg.radarRefRange : cfg.sigmaTau;
}

double doppler_sigma(double d, const ScenarioConfig & cfg)
{
    return cfg.radarRefRange > 0.0 ? cfg.sigmaGamma * d / cfg.radarRefRange : cfg.sigmaGamma;
}

double observe_delay(double d, const ScenarioConfig & cfg, CounterRng & rng)
{
    return 2.0 * d / cfg.c + rng.normal(0.0, cfg.sigmaTau);
}

double observe_doppler(double v, double theta, const ScenarioConfig & cfg, CounterRng & rng)
{
    return 2.0 * v * std::cos(theta) * cfg.fc / cfg.c + rng.normal(0.0, cfg.sigmaGamma);
}

Eigen::VectorXcd observe_array(const VehicleState & s, double thetaPredRsu, const ScenarioConfig & cfg,
                               CounterRng & rng)
{
    Eigen::VectorXcd y = array_response(s.beta, s.theta, thetaPredRsu, cfg.Nt, cfg.Nr, cfg.p());
    const double var = cfg.sigmaY * cfg.sigmaY;
    for (int l = 0; l < cfg.Nr; ++l)
        y(l) += rng.complexNormal(var);
    return y;
}

Observation observe(const VehicleState & s, double thetaPredRsu, const ScenarioConfig & cfg,
                    const ObservationStreams & streams)
{
    ScenarioConfig local = cfg;
    local.sigmaTau = delay_sigma(s.d, cfg);
    local.sigmaGamma = doppler_sigma(s.d, cfg);
    local.radarRefRange = 0.0;
    CounterRng rt(streams.seed, streams.trial, streams.vehicle, streams.slot, Purpose::Delay);
    CounterRng rg(streams.seed, streams.trial, streams.vehicle, streams.slot, Purpose::Doppler);
    CounterRng ry(streams.seed, streams.trial, streams.vehicle, streams.slot, Purpose::Array);
    Observation o;
    o.tau = observe_delay(s.d, local, rt);
    o.gamma = observe_doppler(s.v, s.theta, local, rg);
    o.y = observe_array(s, thetaPredRsu, local, ry);
    return o;
}

} // namespace dfrc
