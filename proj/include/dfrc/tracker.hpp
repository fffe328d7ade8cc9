/**
 * @file tracker.hpp
 * @brief Factor-graph message-passing tracker for one vehicle.
 *
 * All messages are scalar Gaussians. Angle information from the array
 * samples flows through the auxiliary variables eps[q] = exp(-j pi q cos(theta)),
 * q in [1 - Nr, Nt - 1], each tied to theta by a factor kappa[q].
 */

#ifndef DFRC_TRACKER_HPP
#define DFRC_TRACKER_HPP

#include <vector>

#include <Eigen/Core>

#include "dfrc/config.hpp"
#include "dfrc/gaussian.hpp"
#include "dfrc/observation.hpp"

namespace dfrc {

struct BeliefSet
{
    GaussianR d;
    GaussianR theta;
    GaussianR v;
    GaussianC beta;
    double thetaPredRsu = 0.0;      // beam for the next slot
    GaussianR thetaPredVehicle;     // beam for the slot after next
};

struct PredictedMessages
{
    GaussianR d;
    GaussianR theta;
    GaussianR v;
    GaussianC beta;
};

/**
 * @brief Messages on the eps sub-graph.
 *
 * yMean(l, i), yVar(l, i) hold the message from y[l] to eps[i - l]
 * (0-based l and i). Pairs outside the array are simply absent.
 */
struct EpsilonMessages
{
    int Nt = 0;
    int Nr = 0;
    std::vector<GaussianC> forward;     // kappa[q] -> eps[q], index q + Nr - 1
    Eigen::MatrixXcd yMean;
    Eigen::MatrixXd yVar;

    EpsilonMessages() = default;
    EpsilonMessages(int nt, int nr);

    int index(int q) const { return q + Nr - 1; }
    int qMin() const { return 1 - Nr; }
    int qMax() const { return Nt - 1; }

    // Product of all y -> eps[q] messages.
    GaussianC extrinsic(int q) const;
    // eps[i - l] -> y[l]: forward times all other y messages.
    GaussianC toY(int l, int i) const;
};

struct DopplerMessages
{
    GaussianR toV;
    GaussianR toVartheta;
    GaussianR toTheta;
};

struct BetaUpdate
{
    GaussianC belief;
    std::vector<GaussianC> fromY;
    std::vector<GaussianC> toY;
};

struct KappaUpdate
{
    std::vector<GaussianC> forward;     // per q index
    std::vector<GaussianR> toTheta;     // per q index, vague for q = 0
    GaussianR combined;                 // product over q
};

PredictedMessages predict(const BeliefSet & prev, const ScenarioConfig & cfg);

double rsu_predicted_angle(const GaussianR & predTheta);

GaussianR two_step_angle(const BeliefSet & prev, double thetaOneStep, const ScenarioConfig & cfg);

GaussianR update_range(double tau, const GaussianR & predD, const ScenarioConfig & cfg);

// Mean-field messages out of the Doppler factor gamma = C1 v cos(theta).
DopplerMessages update_speed_and_angle_from_doppler(double gamma, const GaussianR & vIn,
                                                    const GaussianR & thetaIn, const ScenarioConfig & cfg,
                                                    double rangeHint = 0.0);

BetaUpdate update_beta(const Eigen::VectorXcd & y, const EpsilonMessages & eps, const GaussianC & predBeta,
                       double thetaPredRsu, const ScenarioConfig & cfg);

// Refreshes eps.yMean / eps.yVar from the extrinsic beta messages.
void update_epsilon(const Eigen::VectorXcd & y, const std::vector<GaussianC> & betaToY, EpsilonMessages & eps,
                    double thetaPredRsu, const ScenarioConfig & cfg);

// Forward cis messages from the theta cavities toward each kappa[q].
std::vector<GaussianC> kappa_forward(const std::vector<GaussianR> & thetaToKappa, int Nt, int Nr);

// Backward kappa[q] -> theta messages given eps extrinsics.
KappaUpdate update_kappa(const std::vector<GaussianR> & thetaToKappa, const EpsilonMessages & eps);

// Single backward message for one q.
GaussianR kappa_to_theta(int q, const GaussianR & thetaCavity, const GaussianC & epsExtrinsic);

class FactorGraphTracker
{
public:
    explicit FactorGraphTracker(const ScenarioConfig & cfg);

    PredictedMessages predict(const BeliefSet & prev) const;
    BeliefSet update(const PredictedMessages & pred, const BeliefSet & prev, const Observation & obs) const;
    BeliefSet track_step(const Observation & obs, const BeliefSet & prev) const;

    // Fills the one- and two-step predictions of a belief.
    void attach_predictions(BeliefSet & b) const;

    const ScenarioConfig & config() const { return cfg_; }

private:
    ScenarioConfig cfg_;
};

} // namespace dfrc

#endif
