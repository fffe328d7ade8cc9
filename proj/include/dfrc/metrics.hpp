#ifndef DFRC_METRICS_HPP
#define DFRC_METRICS_HPP

#include <utility>
#include <vector>

#include "dfrc/config.hpp"
#include "dfrc/gaussian.hpp"

namespace dfrc {

// Normalised beam gain |a^H(t1) a(t2)|^2 for an N-element array, in [0, 1].
double beam_gain(double theta1, double theta2, int N);

// Linear SNR; equals e |alpha|^2 / N0 when both predictions are exact.
double snr(double thetaTrue, double thetaPredRsu, double thetaPredVehicle, double alpha, double e,
           const ScenarioConfig & cfg);

double rate(double snr);
double sum_rate(const std::vector<double> & snrs);

// Probability that the true angle lies within delta of a Gaussian prediction.
double alignment_prob(double thetaTrue, const GaussianR & pred, double delta);

double misalignment_prob(double thetaTrue, const GaussianR & vehiclePred, const GaussianR & rsuPred, double delta);

double rmse(const std::vector<double> & errors);

// Sorted (value, rank / N) pairs, rank from 1.
std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> samples);

double median(std::vector<double> samples);

} // namespace dfrc

#endif
