#ifndef DFRC_BASELINES_HPP
#define DFRC_BASELINES_HPP

#include <Eigen/Core>

#include "dfrc/config.hpp"
#include "dfrc/observation.hpp"
#include "dfrc/rng.hpp"
#include "dfrc/tracker.hpp"

namespace dfrc {

// Which parts of an observation a baseline consumes.
struct MeasurementMask
{
    bool delay = true;
    bool doppler = true;
    bool array = true;
};

using Vector5 = Eigen::Matrix<double, 5, 1>;
using Matrix5 = Eigen::Matrix<double, 5, 5>;

// State ordering: theta, d, v, Re beta, Im beta.
struct EkfState
{
    Vector5 mean = Vector5::Zero();
    Matrix5 cov = Matrix5::Identity();
};

EkfState ekf_from_beliefs(const BeliefSet & b);
BeliefSet ekf_to_beliefs(const EkfState & s, const ScenarioConfig & cfg);

// Linearised transition with its numeric Jacobian.
EkfState ekf_predict(const EkfState & s, const ScenarioConfig & cfg);
EkfState ekf_update(const EkfState & pred, const Observation & obs, double thetaPredRsu,
                    const ScenarioConfig & cfg, const MeasurementMask & mask = {});
EkfState ekf_step(const EkfState & s, const Observation & obs, double thetaPredRsu, const ScenarioConfig & cfg,
                  const MeasurementMask & mask = {});

// Stacked measurement function: tau, gamma, Re y, Im y.
Eigen::VectorXd measurement_function(const Vector5 & x, double thetaPredRsu, const ScenarioConfig & cfg,
                                     const MeasurementMask & mask);

struct ParticleCloud
{
    Eigen::ArrayXd theta;
    Eigen::ArrayXd d;
    Eigen::ArrayXd v;
    Eigen::ArrayXcd beta;
    Eigen::ArrayXd w;
    bool degenerate = false;
    int resamples = 0;

    int size() const { return static_cast<int>(w.size()); }
    double ess() const { return 1.0 / w.square().sum(); }
};

ParticleCloud pf_init(const BeliefSet & prior, int R, CounterRng & rng);

// Bootstrap step: exact kinematics with process noise, joint likelihood,
// systematic resampling when ESS < R/2.
void pf_step(ParticleCloud & cloud, const Observation & obs, double thetaPredRsu, const ScenarioConfig & cfg,
             CounterRng & rng, const MeasurementMask & mask = {});

// Weighted means and variances; predictions are not attached.
BeliefSet pf_estimate(const ParticleCloud & cloud);

} // namespace dfrc

#endif
