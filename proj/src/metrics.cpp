#include "dfrc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dfrc/observation.hpp"

namespace dfrc {

double beam_gain(double theta1, double theta2, int N)
{
    const std::complex<double> g = array_gain(std::cos(theta1) - std::cos(theta2), N);
    return std::norm(g) / (static_cast<double>(N) * N);
}

double snr(double thetaTrue, double thetaPredRsu, double thetaPredVehicle, double alpha, double e,
           const ScenarioConfig & cfg)
{
    const double gv = beam_gain(thetaPredVehicle, thetaTrue, cfg.M);
    const double gr = beam_gain(thetaTrue, thetaPredRsu, cfg.Nt);
    return e * alpha * alpha * gv * gr / cfg.N0;
}

double rate(double snr)
{
    return std::log2(1.0 + snr);
}

double sum_rate(const std::vector<double> & snrs)
{
    double r = 0.0;
    for (double s : snrs) r += rate(s);
    return r;
}

double alignment_prob(double thetaTrue, const GaussianR & pred, double delta)
{
    if (pred.var <= 0.0)
        return std::abs(thetaTrue - pred.mean) <= delta ? 1.0 : 0.0;
    const double s = std::sqrt(2.0 * pred.var);
    const double hi = (thetaTrue + delta - pred.mean) / s;
    const double lo = (thetaTrue - delta - pred.mean) / s;
    return 0.5 * (std::erf(hi) - std::erf(lo));
}

double misalignment_prob(double thetaTrue, const GaussianR & vehiclePred, const GaussianR & rsuPred, double delta)
{
    const double p = 1.0 - alignment_prob(thetaTrue, vehiclePred, delta) * alignment_prob(thetaTrue, rsuPred, delta);
    return std::clamp(p, 0.0, 1.0);
}

double rmse(const std::vector<double> & errors)
{
    if (errors.empty()) throw std::invalid_argument("rmse of empty sample");
    double s = 0.0;
    for (double x : errors) s += x * x;
    return std::sqrt(s / errors.size());
}

std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> samples)
{
    std::sort(samples.begin(), samples.end());
    std::vector<std::pair<double, double>> out;
    out.reserve(samples.size());
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        out.emplace_back(samples[i], (i + 1) / n);
    return out;
}

double median(std::vector<double> samples)
{
    if (samples.empty()) throw std::invalid_argument("median of empty sample");
    const std::size_t n = samples.size();
    std::nth_element(samples.begin(), samples.begin() + n / 2, samples.end());
    const double hi = samples[n / 2];
    if (n % 2) return hi;
    const double lo = *std::max_element(samples.begin(), samples.begin() + n / 2);
    return 0.5 * (lo + hi);
}

} // namespace dfrc
