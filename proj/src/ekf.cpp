#include "dfrc/baselines.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace dfrc {

namespace {

constexpr double pi = std::numbers::pi;

Vector5 transition(const Vector5 & x, const ScenarioConfig & cfg)
{
    const double th = x(0), d = x(1), v = x(2);
    const double vT = v * cfg.T;
    const double rho = 1.0 + vT * std::cos(th) / d;
    Vector5 y;
    y << th + vT * std::sin(th) / d, d - vT * std::cos(th), v, rho * x(3), rho * x(4);
    return y;
}

double step(double xi)
{
    return 1e-6 * std::max(1.0, std::abs(xi));
}

template <typename F>
Eigen::MatrixXd numericJacobian(F f, const Vector5 & x)
{
    const Eigen::VectorXd f0 = f(x);
    Eigen::MatrixXd J(f0.size(), 5);
    for (int i = 0; i < 5; ++i)
    {
        const double h = step(x(i));
        Vector5 xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        J.col(i) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return J;
}

void condition(EkfState & s)
{
    s.cov = 0.5 * (s.cov + s.cov.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix5> es(s.cov);
    if (es.eigenvalues().minCoeff() < 0.0)
    {
        const Vector5 lam = es.eigenvalues().cwiseMax(0.0);
        s.cov = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
    }
    s.mean(0) = std::clamp(s.mean(0), 0.01, pi - 0.01);
}

} // namespace

EkfState ekf_from_beliefs(const BeliefSet & b)
{
    EkfState s;
    s.mean << b.theta.mean, b.d.mean, b.v.mean, b.beta.mean.real(), b.beta.mean.imag();
    s.cov.setZero();
    s.cov.diagonal() << b.theta.var, b.d.var, b.v.var, b.beta.var / 2.0, b.beta.var / 2.0;
    return s;
}

BeliefSet ekf_to_beliefs(const EkfState & s, const ScenarioConfig & cfg)
{
    BeliefSet b;
    b.theta = {s.mean(0), s.cov(0, 0)};
    b.d = {s.mean(1), s.cov(1, 1)};
    b.v = {s.mean(2), s.cov(2, 2)};
    b.beta = {{s.mean(3), s.mean(4)}, s.cov(3, 3) + s.cov(4, 4)};
    b.thetaPredRsu = transition(s.mean, cfg)(0);
    b.thetaPredVehicle = two_step_angle(b, b.thetaPredRsu, cfg);
    return b;
}

EkfState ekf_predict(const EkfState & s, const ScenarioConfig & cfg)
{
    auto f = [&](const Vector5 & x) -> Eigen::VectorXd { return transition(x, cfg); };
    const Matrix5 F = numericJacobian(f, s.mean);
    Vector5 q;
    const double sb2 = cfg.sigmaBeta * cfg.sigmaBeta / 2.0;
    q << cfg.sigmaTheta * cfg.sigmaTheta, cfg.sigmaD * cfg.sigmaD, cfg.sigmaV * cfg.sigmaV, sb2, sb2;

    EkfState p;
    p.mean = transition(s.mean, cfg);
    p.cov = F * s.cov * F.transpose();
    p.cov.diagonal() += q;
    condition(p);
    return p;
}

Eigen::VectorXd measurement_function(const Vector5 & x, double thetaPredRsu, const ScenarioConfig & cfg,
                                     const MeasurementMask & mask)
{
    const int n = (mask.delay ? 1 : 0) + (mask.doppler ? 1 : 0) + (mask.array ? 2 * cfg.Nr : 0);
    Eigen::VectorXd z(n);
    int k = 0;
    if (mask.delay) z(k++) = 2.0 * x(1) / cfg.c;
    if (mask.doppler) z(k++) = 2.0 * cfg.fc / cfg.c * x(2) * std::cos(x(0));
    if (mask.array)
    {
        const Eigen::VectorXcd y = array_response({x(3), x(4)}, x(0), thetaPredRsu, cfg.Nt, cfg.Nr, cfg.p());
        z.segment(k, cfg.Nr) = y.real();
        z.segment(k + cfg.Nr, cfg.Nr) = y.imag();
    }
    return z;
}

EkfState ekf_update(const EkfState & pred, const Observation & obs, double thetaPredRsu,
                    const ScenarioConfig & cfg, const MeasurementMask & mask)
{
    auto h = [&](const Vector5 & x) { return measurement_function(x, thetaPredRsu, cfg, mask); };
    const Eigen::MatrixXd H = numericJacobian(h, pred.mean);
    const Eigen::VectorXd h0 = h(pred.mean);

    Eigen::VectorXd z(h0.size()), r(h0.size());
    int k = 0;
    if (mask.delay)
    {
        const double s = delay_sigma(pred.mean(1), cfg);
        z(k) = obs.tau;
        r(k++) = s * s;
    }
    if (mask.doppler)
    {
        const double s = doppler_sigma(pred.mean(1), cfg);
        z(k) = obs.gamma;
        r(k++) = s * s;
    }
    if (mask.array)
    {
        z.segment(k, cfg.Nr) = obs.y.real();
        z.segment(k + cfg.Nr, cfg.Nr) = obs.y.imag();
        r.segment(k, 2 * cfg.Nr).setConstant(cfg.sigmaY * cfg.sigmaY / 2.0);
    }

    // R is diagonal, so the batch update equals a sequence of scalar updates
    // on the model linearised at the predicted mean.
    Vector5 dx = Vector5::Zero();
    Matrix5 P = pred.cov;
    for (int i = 0; i < z.size(); ++i)
    {
        const Eigen::Matrix<double, 1, 5> Hi = H.row(i);
        const Vector5 PHt = P * Hi.transpose();
        double s = Hi.dot(PHt) + r(i);
        if (!(s > 0.0)) s += 1e-9;
        const Vector5 K = PHt / s;
        dx += K * (z(i) - h0(i) - Hi.dot(dx));
        P -= K * PHt.transpose();
    }

    EkfState out;
    out.mean = pred.mean + dx;
    out.cov = P;
    condition(out);
    return out;
}

EkfState ekf_step(const EkfState & s, const Observation & obs, double thetaPredRsu, const ScenarioConfig & cfg,
                  const MeasurementMask & mask)
{
    return ekf_update(ekf_predict(s, cfg), obs, thetaPredRsu, cfg, mask);
}

} // namespace dfrc
