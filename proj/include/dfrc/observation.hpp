#ifndef DFRC_OBSERVATION_HPP
#define DFRC_OBSERVATION_HPP

#include <complex>
#include <cstdint>

#include <Eigen/Core>

#include "dfrc/config.hpp"
#include "dfrc/rng.hpp"
#include "dfrc/scenario.hpp"

namespace dfrc {

struct Observation
{
    double tau = 0.0;
    double gamma = 0.0;
    Eigen::VectorXcd y;
};

// Element i (0-based) is exp(-j pi i cos(theta)) / sqrt(N).
Eigen::VectorXcd steering(double theta, int N);

// Noise-free array response beta * p * G(u_hat - u) * exp(j pi l u), l = 0..Nr-1,
// where G(x) = sum_i exp(j pi i x) over Nt transmit elements.
Eigen::VectorXcd array_response(std::complex<double> beta, double theta, double thetaPredRsu,
                                int Nt, int Nr, double p);

// Sum_{i=0}^{N-1} exp(j pi i x).
std::complex<double> array_gain(double x, int N);

double observe_delay(double d, const ScenarioConfig & cfg, CounterRng & rng);
double observe_doppler(double v, double theta, const ScenarioConfig & cfg, CounterRng & rng);
Eigen::VectorXcd observe_array(const VehicleState & s, double thetaPredRsu, const ScenarioConfig & cfg,
                               CounterRng & rng);

struct ObservationStreams
{
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    std::uint64_t vehicle = 0;
    std::uint64_t slot = 0;
};

// All three measurements, each from its own substream.
Observation observe(const VehicleState & s, double thetaPredRsu, const ScenarioConfig & cfg,
                    const ObservationStreams & streams);

// Effective radar noise std at range d (identity unless radarRefRange > 0).
double delay_sigma(double d, const ScenarioConfig & cfg);
double doppler_sigma(double d, const ScenarioConfig & cfg);

} // namespace dfrc

#endif
