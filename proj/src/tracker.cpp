#include "dfrc/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dfrc {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kThetaMargin = 0.01;
// Positive secant slopes may only widen the angle belief this much (factor 1 / (1 - s)).
constexpr double kMaxVarianceSlope = 0.2;

GaussianR centeredArccos(const GaussianR & g) { return arccos_moments(g, g.mean); }
GaussianR centeredArcsin(const GaussianR & g) { return arcsin_moments(g, g.mean); }

double clampAngle(double t) { return std::clamp(t, kThetaMargin, pi - kThetaMargin); }

// Natural parameters of a message; vague and absent messages contribute nothing.
struct Natural
{
    double prec = 0.0;
    std::complex<double> eta{};
};

GaussianC fromNatural(const Natural & n)
{
    if (!(n.prec > 1.0 / VAR_MAX)) return GaussianC::vague();
    return {n.eta / n.prec, clampVariance(1.0 / n.prec)};
}

} // namespace

// ---------------------------------------------------------------- eps messages

EpsilonMessages::EpsilonMessages(int nt, int nr)
    : Nt(nt)
    , Nr(nr)
    , forward(nt + nr - 1, GaussianC::vague())
    , yMean(Eigen::MatrixXcd::Zero(nr, nt))
    , yVar(Eigen::MatrixXd::Constant(nr, nt, VAR_MAX))
{}

GaussianC EpsilonMessages::extrinsic(int q) const
{
    Natural n;
    for (int l = 0; l < Nr; ++l)
    {
        const int i = q + l;
        if (i < 0 || i >= Nt || yVar(l, i) >= VAR_MAX) continue;
        n.prec += 1.0 / yVar(l, i);
        n.eta += yMean(l, i) / yVar(l, i);
    }
    return fromNatural(n);
}

GaussianC EpsilonMessages::toY(int l, int i) const
{
    const int q = i - l;
    const GaussianC & f = forward[index(q)];
    if (f.isDelta()) return f;
    Natural n;
    for (int k = 0; k < Nr; ++k)
    {
        const int j = q + k;
        if (k == l || j < 0 || j >= Nt || yVar(k, j) >= VAR_MAX) continue;
        n.prec += 1.0 / yVar(k, j);
        n.eta += yMean(k, j) / yVar(k, j);
    }
    if (!(n.prec > 1.0 / VAR_MAX)) return f;
    return product(f, fromNatural(n));
}

namespace {

// All eps -> y messages in one pass, O(Nt Nr).
struct EpsToY
{
    Eigen::MatrixXcd mean;
    Eigen::MatrixXd var;
};

EpsToY allToY(const EpsilonMessages & eps)
{
    const int Q = eps.Nt + eps.Nr - 1;
    std::vector<Natural> agg(Q);
    for (int l = 0; l < eps.Nr; ++l)
        for (int i = 0; i < eps.Nt; ++i)
        {
            if (eps.yVar(l, i) >= VAR_MAX) continue;
            Natural & a = agg[eps.index(i - l)];
            a.prec += 1.0 / eps.yVar(l, i);
            a.eta += eps.yMean(l, i) / eps.yVar(l, i);
        }

    EpsToY out{Eigen::MatrixXcd(eps.Nr, eps.Nt), Eigen::MatrixXd(eps.Nr, eps.Nt)};
    for (int l = 0; l < eps.Nr; ++l)
        for (int i = 0; i < eps.Nt; ++i)
        {
            const int qi = eps.index(i - l);
            const GaussianC & f = eps.forward[qi];
            GaussianC m = f;
            if (!f.isDelta() && eps.yVar(l, i) < VAR_MAX)
            {
                Natural n = agg[qi];
                n.prec -= 1.0 / eps.yVar(l, i);
                n.eta -= eps.yMean(l, i) / eps.yVar(l, i);
                if (n.prec > 1.0 / VAR_MAX)
                    m = product(f, fromNatural(n));
            }
            out.mean(l, i) = m.mean;
            out.var(l, i) = m.var;
        }
    return out;
}

Eigen::VectorXcd transmitWeights(double thetaPredRsu, int Nt)
{
    Eigen::VectorXcd c(Nt);
    const double u = std::cos(thetaPredRsu);
    for (int i = 0; i < Nt; ++i)
        c(i) = std::polar(1.0, pi * i * u);
    return c;
}

} // namespace

// ---------------------------------------------------------------- prediction

PredictedMessages predict(const BeliefSet & prev, const ScenarioConfig & cfg)
{
    const double dh = prev.d.mean;
    if (!(dh > 0.0))
        throw std::domain_error("predicted range must be positive");
    const double vh = prev.v.mean;
    const double th = prev.theta.mean;
    const double vT = vh * cfg.T;
    const double rho = 1.0 + vT * std::cos(th) / dh;

    PredictedMessages p;
    p.v = {prev.v.mean, prev.v.var + cfg.sigmaV * cfg.sigmaV};
    p.d = {prev.d.mean - vT * std::cos(th), prev.d.var + cfg.sigmaD * cfg.sigmaD};
    p.theta = {prev.theta.mean + vT * std::sin(th) / dh, prev.theta.var + cfg.sigmaTheta * cfg.sigmaTheta};
    p.beta = {rho * prev.beta.mean, rho * rho * prev.beta.var + cfg.sigmaBeta * cfg.sigmaBeta};
    return p;
}

double rsu_predicted_angle(const GaussianR & predTheta)
{
    return predTheta.mean;
}

GaussianR two_step_angle(const BeliefSet & prev, double thetaOneStep, const ScenarioConfig & cfg)
{
    const double den = prev.d.mean - prev.v.mean * cfg.T * std::cos(prev.theta.mean);
    if (!(den > 0.0))
        throw std::domain_error("predicted range must be positive");
    const double mean = thetaOneStep + prev.v.mean * cfg.T * std::sin(thetaOneStep) / den;
    const double var = 2.0 * cfg.sigmaTheta * cfg.sigmaTheta + prev.theta.var;
    return {mean, var};
}

// ---------------------------------------------------------------- observation updates

GaussianR update_range(double tau, const GaussianR & predD, const ScenarioConfig & cfg)
{
    const double s = delay_sigma(predD.mean, cfg);
    const GaussianR lik{cfg.c * tau / 2.0, s * s * cfg.c * cfg.c / 4.0};
    return product(lik, predD);
}

DopplerMessages update_speed_and_angle_from_doppler(double gamma, const GaussianR & vIn,
                                                    const GaussianR & thetaIn, const ScenarioConfig & cfg,
                                                    double rangeHint)
{
    const double c1 = 2.0 * cfg.fc / cfg.c;
    const double sg = rangeHint > 0.0 ? doppler_sigma(rangeHint, cfg) : cfg.sigmaGamma;
    const double s2 = sg * sg;
    const GaussianR vartheta = cos_moments(thetaIn);

    DopplerMessages out;
    const double e2t = vartheta.var + vartheta.mean * vartheta.mean;
    if (e2t > 0.0)
        out.toV = {gamma * vartheta.mean / (c1 * e2t), clampVariance(s2 / (c1 * c1 * e2t))};
    else
        out.toV = GaussianR::vague(vIn.mean);

    const double e2v = vIn.var + vIn.mean * vIn.mean;
    if (e2v > 0.0)
        out.toVartheta = {gamma * vIn.mean / (c1 * e2v), clampVariance(s2 / (c1 * c1 * e2v))};
    else
        out.toVartheta = GaussianR::vague(vartheta.mean);

    out.toTheta = mapExtrinsic(vartheta, out.toVartheta, centeredArccos);
    return out;
}

BetaUpdate update_beta(const Eigen::VectorXcd & y, const EpsilonMessages & eps, const GaussianC & predBeta,
                       double thetaPredRsu, const ScenarioConfig & cfg)
{
    const double p = cfg.p();
    const double s2 = cfg.sigmaY * cfg.sigmaY;
    const Eigen::VectorXcd c = transmitWeights(thetaPredRsu, eps.Nt);
    const EpsToY e = allToY(eps);

    BetaUpdate out;
    out.fromY.resize(eps.Nr);
    out.toY.resize(eps.Nr);
    GaussianC belief = predBeta;
    for (int l = 0; l < eps.Nr; ++l)
    {
        const std::complex<double> m = (e.mean.row(l).transpose().array() * c.array()).sum();
        const double es2 = e.var.row(l).sum() + std::norm(m);
        if (es2 > 0.0)
            out.fromY[l] = {std::conj(m) * y(l) / (p * es2), clampVariance(s2 / (p * p * es2))};
        else
            out.fromY[l] = GaussianC::vague();
        belief = product(belief, out.fromY[l]);
    }
    for (int l = 0; l < eps.Nr; ++l)
        out.toY[l] = divide(belief, out.fromY[l]);
    out.belief = belief;
    return out;
}

void update_epsilon(const Eigen::VectorXcd & y, const std::vector<GaussianC> & betaToY, EpsilonMessages & eps,
                    double thetaPredRsu, const ScenarioConfig & cfg)
{
    const double p = cfg.p();
    const double s2 = cfg.sigmaY * cfg.sigmaY;
    const Eigen::VectorXcd c = transmitWeights(thetaPredRsu, eps.Nt);
    const EpsToY e = allToY(eps);

    for (int l = 0; l < eps.Nr; ++l)
    {
        const GaussianC & b = betaToY[l];
        const double eb2 = std::norm(b.mean) + b.var;
        const std::complex<double> total = (e.mean.row(l).transpose().array() * c.array()).sum();
        for (int i = 0; i < eps.Nt; ++i)
        {
            if (!(eb2 > 0.0) || b.isVague())
            {
                eps.yMean(l, i) = 0.0;
                eps.yVar(l, i) = VAR_MAX;
                continue;
            }
            const std::complex<double> others = total - c(i) * e.mean(l, i);
            const std::complex<double> resid = std::conj(b.mean) * y(l) / p - eb2 * others;
            eps.yMean(l, i) = resid / (c(i) * eb2);
            eps.yVar(l, i) = clampVariance(s2 / (p * p * eb2));
        }
    }
}

// ---------------------------------------------------------------- kappa factors

std::vector<GaussianC> kappa_forward(const std::vector<GaussianR> & thetaToKappa, int Nt, int Nr)
{
    std::vector<GaussianC> f(Nt + Nr - 1);
    for (int q = 1 - Nr; q <= Nt - 1; ++q)
    {
        const int qi = q + Nr - 1;
        if (q == 0)
        {
            f[qi] = GaussianC::delta(1.0);
            continue;
        }
        const GaussianR t = cos_moments(thetaToKappa[qi]);
        f[qi] = cis_moments(q, affine(t, pi));
    }
    return f;
}

GaussianR kappa_to_theta(int q, const GaussianR & thetaCavity, const GaussianC & epsExtrinsic)
{
    if (q == 0 || epsExtrinsic.isVague())
        return GaussianR::vague(thetaCavity.mean);

    const double qpi = q * pi;
    const double offset = pi / 4.0;
    const GaussianR t = cos_moments(thetaCavity);

    // residual phase psi = offset - q pi (cos(theta) - t.mean), observed through exp(j psi)
    const GaussianR psiCavity{offset, qpi * qpi * t.var};
    // eps lives on the unit circle, so only the phase of the extrinsic mean carries
    // information; its modulus sets the concentration.
    const std::complex<double> r0 = epsExtrinsic.mean * std::polar(1.0, qpi * t.mean + offset);
    const double rho = std::abs(r0);
    if (!(rho > 0.0))
        return GaussianR::vague(thetaCavity.mean);
    const std::complex<double> r = r0 / rho;
    const double halfVar = epsExtrinsic.var / (2.0 * rho);

    const GaussianR viaCos = mapExtrinsic(cos_moments(psiCavity), GaussianR{r.real(), halfVar}, centeredArccos);
    const GaussianR viaSin = mapExtrinsic(sin_moments(psiCavity), GaussianR{r.imag(), halfVar}, centeredArcsin);
    const GaussianR psi = product(viaCos, viaSin);
    if (psi.isVague())
        return GaussianR::vague(thetaCavity.mean);

    const GaussianR tMsg{t.mean + (offset - psi.mean) / qpi, psi.var / (qpi * qpi)};
    return mapExtrinsic(t, tMsg, centeredArccos);
}

KappaUpdate update_kappa(const std::vector<GaussianR> & thetaToKappa, const EpsilonMessages & eps)
{
    KappaUpdate out;
    out.forward = kappa_forward(thetaToKappa, eps.Nt, eps.Nr);
    const int Q = eps.Nt + eps.Nr - 1;
    out.toTheta.resize(Q);
    out.combined = GaussianR::vague();
    for (int q = eps.qMin(); q <= eps.qMax(); ++q)
    {
        const int qi = eps.index(q);
        out.toTheta[qi] = kappa_to_theta(q, thetaToKappa[qi], eps.extrinsic(q));
        out.combined = product(out.combined, out.toTheta[qi]);
    }
    return out;
}

// ---------------------------------------------------------------- tracker

FactorGraphTracker::FactorGraphTracker(const ScenarioConfig & cfg)
    : cfg_(cfg)
{}

PredictedMessages FactorGraphTracker::predict(const BeliefSet & prev) const
{
    return dfrc::predict(prev, cfg_);
}

BeliefSet FactorGraphTracker::update(const PredictedMessages & pred, const BeliefSet & prev,
                                     const Observation & obs) const
{
    const int Nt = cfg_.Nt, Nr = cfg_.Nr;
    const int Q = Nt + Nr - 1;
    const double beam = prev.thetaPredRsu;

    BeliefSet b;
    b.d = update_range(obs.tau, pred.d, cfg_);

    EpsilonMessages eps(Nt, Nr);
    std::vector<GaussianR> kappaMsg(Q, GaussianR::vague(pred.theta.mean));
    std::vector<GaussianR> thetaToKappa(Q, pred.theta);
    GaussianR thetaToGamma = pred.theta;
    DopplerMessages dop;
    GaussianR theta = pred.theta;
    GaussianC beta = pred.beta;

    // Relaxed schedule: every nonlinear factor is linearized at u, and u moves toward the
    // fresh belief mean with a secant step. The secant slope s of the sweep map also
    // rescales the final precision by (1 - s).
    double u = pred.theta.mean, uPrev = u, tPrev = u, slope = 0.0;
    bool haveSlope = false;
    const double maxStep = 2.0 * std::sqrt(pred.theta.var);

    for (int it = 0; it < cfg_.mpIterations; ++it)
    {
        if (it == 0 || cfg_.dopplerEverySweep)
            dop = update_speed_and_angle_from_doppler(obs.gamma, pred.v, thetaToGamma, cfg_, pred.d.mean);

        eps.forward = kappa_forward(thetaToKappa, Nt, Nr);
        const BetaUpdate bu = update_beta(obs.y, eps, pred.beta, beam, cfg_);
        beta = bu.belief;
        update_epsilon(obs.y, bu.toY, eps, beam, cfg_);

        for (int q = 1 - Nr; q <= Nt - 1; ++q)
        {
            const int qi = eps.index(q);
            GaussianR m = kappa_to_theta(q, thetaToKappa[qi], eps.extrinsic(q));
            if (it > 0) m = blend(m, kappaMsg[qi], cfg_.damping);
            kappaMsg[qi] = m;
        }

        GaussianR fresh = product(pred.theta, dop.toTheta);
        for (const GaussianR & m : kappaMsg)
            fresh = product(fresh, m);

        if (!cfg_.relaxedSchedule)
        {
            theta = fresh;
            theta.mean = clampAngle(theta.mean);
            thetaToGamma = divide(theta, dop.toTheta);
            for (int qi = 0; qi < Q; ++qi)
                thetaToKappa[qi] = divide(theta, kappaMsg[qi]);
            continue;
        }

        const double t = fresh.mean;
        if (it > 0 && std::abs(u - uPrev) > 1e-3 * std::sqrt(fresh.var))
        {
            slope = std::min((t - tPrev) / (u - uPrev), 0.9);
            haveSlope = true;
        }
        const double omega = haveSlope ? std::min(1.0, 1.0 / (1.0 - slope)) : 1.0;
        uPrev = u;
        tPrev = t;
        u = clampAngle(u + std::clamp(omega * (t - u), -maxStep, maxStep));

        theta = {u, fresh.var};
        thetaToGamma = {u, divide(fresh, dop.toTheta).var};
        for (int qi = 0; qi < Q; ++qi)
            thetaToKappa[qi] = {u, divide(fresh, kappaMsg[qi]).var};
    }
    if (cfg_.relaxedSchedule && haveSlope) theta.var = clampVariance(theta.var / (1.0 - std::min(slope, kMaxVarianceSlope)));
    if (cfg_.mpIterations <= 0)
    {
        dop = update_speed_and_angle_from_doppler(obs.gamma, pred.v, pred.theta, cfg_, pred.d.mean);
        theta = product(pred.theta, dop.toTheta);
        theta.mean = clampAngle(theta.mean);
    }

    b.theta = theta;
    b.v = product(pred.v, dop.toV);
    b.beta = beta;
    attach_predictions(b);
    return b;
}

BeliefSet FactorGraphTracker::track_step(const Observation & obs, const BeliefSet & prev) const
{
    return update(predict(prev), prev, obs);
}

void FactorGraphTracker::attach_predictions(BeliefSet & b) const
{
    const PredictedMessages next = dfrc::predict(b, cfg_);
    b.thetaPredRsu = rsu_predicted_angle(next.theta);
    b.thetaPredVehicle = two_step_angle(b, b.thetaPredRsu, cfg_);
}

} // namespace dfrc
