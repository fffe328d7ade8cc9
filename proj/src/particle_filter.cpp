#include "dfrc/baselines.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace dfrc {

namespace {

constexpr double pi = std::numbers::pi;

void systematicResample(ParticleCloud & c, CounterRng & rng)
{
    const int R = c.size();
    const double u0 = rng.uniform(0.0, 1.0 / R);
    ParticleCloud out = c;
    double cum = c.w(0);
    int j = 0;
    for (int i = 0; i < R; ++i)
    {
        const double u = u0 + static_cast<double>(i) / R;
        while (u > cum && j < R - 1)
            cum += c.w(++j);
        out.theta(i) = c.theta(j);
        out.d(i) = c.d(j);
        out.v(i) = c.v(j);
        out.beta(i) = c.beta(j);
    }
    out.w.setConstant(1.0 / R);
    out.resamples = c.resamples + 1;
    c = std::move(out);
}

} // namespace

ParticleCloud pf_init(const BeliefSet & prior, int R, CounterRng & rng)
{
    ParticleCloud c;
    c.theta.resize(R);
    c.d.resize(R);
    c.v.resize(R);
    c.beta.resize(R);
    c.w = Eigen::ArrayXd::Constant(R, 1.0 / R);
    for (int i = 0; i < R; ++i)
    {
        c.theta(i) = std::clamp(rng.normal(prior.theta.mean, std::sqrt(prior.theta.var)), 0.01, pi - 0.01);
        c.d(i) = rng.normal(prior.d.mean, std::sqrt(prior.d.var));
        c.v(i) = rng.normal(prior.v.mean, std::sqrt(prior.v.var));
        c.beta(i) = prior.beta.mean + rng.complexNormal(prior.beta.var);
    }
    return c;
}

void pf_step(ParticleCloud & c, const Observation & obs, double thetaPredRsu, const ScenarioConfig & cfg,
             CounterRng & rng, const MeasurementMask & mask)
{
    const int R = c.size();
    const double c1 = 2.0 * cfg.fc / cfg.c;
    const double p = cfg.p();
    const double uHat = std::cos(thetaPredRsu);
    const double sy2 = cfg.sigmaY * cfg.sigmaY;
    const double yNorm = obs.y.squaredNorm();

    // propagate
    for (int i = 0; i < R; ++i)
    {
        const double th = c.theta(i), d = c.d(i);
        const double dd = c.v(i) * cfg.T;
        double dn = std::sqrt(d * d + dd * dd - 2.0 * d * dd * std::cos(th));
        double tn = th + std::asin(std::clamp(dd * std::sin(th) / dn, -1.0, 1.0));
        const std::complex<double> bn = c.beta(i) * (d / dn);
        dn += rng.normal(0.0, cfg.sigmaD);
        tn = std::clamp(tn + rng.normal(0.0, cfg.sigmaTheta), 0.01, pi - 0.01);
        c.theta(i) = tn;
        c.d(i) = std::max(dn, 1e-3);
        c.v(i) += rng.normal(0.0, cfg.sigmaV);
        c.beta(i) = bn + rng.complexNormal(cfg.sigmaBeta * cfg.sigmaBeta);
    }

    // weight
    Eigen::ArrayXd logw(R);
    for (int i = 0; i < R; ++i)
    {
        double lw = std::log(c.w(i));
        if (mask.delay)
        {
            const double s = delay_sigma(c.d(i), cfg);
            if (s > 0.0)
            {
                const double e = obs.tau - 2.0 * c.d(i) / cfg.c;
                lw -= e * e / (2.0 * s * s) + std::log(s);
            }
        }
        if (mask.doppler)
        {
            const double s = doppler_sigma(c.d(i), cfg);
            if (s > 0.0)
            {
                const double e = obs.gamma - c1 * c.v(i) * std::cos(c.theta(i));
                lw -= e * e / (2.0 * s * s) + std::log(s);
            }
        }
        if (mask.array && sy2 > 0.0)
        {
            // y[l] = g exp(j pi l u); residual norm via the correlation sum
            const double u = std::cos(c.theta(i));
            const std::complex<double> wt = std::polar(1.0, pi * (uHat - u));
            const std::complex<double> wr = std::polar(1.0, -pi * u);
            std::complex<double> G{0.0, 0.0}, ph{1.0, 0.0};
            for (int k = 0; k < cfg.Nt; ++k, ph *= wt) G += ph;
            std::complex<double> S{0.0, 0.0};
            ph = 1.0;
            for (int l = 0; l < cfg.Nr; ++l, ph *= wr) S += obs.y(l) * ph;
            const std::complex<double> g = c.beta(i) * p * G;
            const double res = yNorm - 2.0 * std::real(std::conj(g) * S) + std::norm(g) * cfg.Nr;
            lw -= res / sy2;
        }
        logw(i) = lw;
    }

    const double mx = logw.maxCoeff();
    if (!std::isfinite(mx))
    {
        c.w.setConstant(1.0 / R);
        c.degenerate = true;
        return;
    }
    c.w = (logw - mx).exp();
    const double sum = c.w.sum();
    if (!(sum > 0.0) || !std::isfinite(sum))
    {
        c.w.setConstant(1.0 / R);
        c.degenerate = true;
        return;
    }
    c.w /= sum;

    if (c.ess() < R / 2.0)
        systematicResample(c, rng);
}

BeliefSet pf_estimate(const ParticleCloud & c)
{
    auto moments = [&](const Eigen::ArrayXd & x) {
        const double m = (c.w * x).sum();
        const double v = (c.w * (x - m).square()).sum();
        return GaussianR{m, v};
    };
    BeliefSet b;
    b.theta = moments(c.theta);
    b.d = moments(c.d);
    b.v = moments(c.v);
    const std::complex<double> mb = (c.w.cast<std::complex<double>>() * c.beta).sum();
    b.beta = {mb, (c.w * (c.beta - mb).abs2()).sum()};
    return b;
}

} // namespace dfrc
