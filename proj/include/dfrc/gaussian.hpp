/**
 * @file gaussian.hpp
 * @brief Scalar Gaussian messages and their closed-form algebra.
 *
 * Messages are stored in moment form (mean, variance). The scalar type may be
 * real or std::complex; complex messages are circularly symmetric, so the
 * variance is always real and equals E|x - mean|^2.
 */

#ifndef DFRC_GAUSSIAN_HPP
#define DFRC_GAUSSIAN_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace dfrc {

inline constexpr double VAR_FLOOR = 1e-12;
inline constexpr double VAR_MAX = 1e12;

template <typename T> struct RealOf { using type = T; };
template <typename T> struct RealOf<std::complex<T>> { using type = T; };
template <typename T> using RealOf_t = typename RealOf<T>::type;

template <typename Scalar = double>
struct Gaussian
{
    using Real = RealOf_t<Scalar>;

    Scalar mean{};
    Real var{};

    static Gaussian vague(Scalar m = Scalar{}) { return {m, Real(VAR_MAX)}; }
    static Gaussian delta(Scalar m) { return {m, Real(0)}; }

    Real precision() const { return Real(1) / var; }
    bool isVague() const { return var >= Real(VAR_MAX); }
    bool isDelta() const { return var == Real(0); }
};

using GaussianR = Gaussian<double>;
using GaussianC = Gaussian<std::complex<double>>;

template <typename Real>
Real clampVariance(Real v)
{
    return std::clamp(v, Real(VAR_FLOOR), Real(VAR_MAX));
}

/**
 * @brief Product of two Gaussian densities, renormalised.
 *
 * A zero-variance operand is a point mass and wins. Two point masses at
 * different locations have no common support and raise std::domain_error.
 */
template <typename Scalar>
Gaussian<Scalar> product(const Gaussian<Scalar> & a, const Gaussian<Scalar> & b)
{
    using Real = RealOf_t<Scalar>;
    if (a.isDelta() && b.isDelta())
    {
        if (a.mean != b.mean)
            throw std::domain_error("inconsistent delta messages");
        return a;
    }
    if (a.isDelta()) return a;
    if (b.isDelta()) return b;

    const Real pa = Real(1) / a.var;
    const Real pb = Real(1) / b.var;
    const Real var = Real(1) / (pa + pb);
    const Scalar mean = var * (pa * a.mean + pb * b.mean);
    return {mean, clampVariance(var)};
}

/**
 * @brief Divide message b out of belief a (extrinsic message).
 *
 * Non-positive resulting precision yields a vague message at a's mean.
 */
template <typename Scalar>
Gaussian<Scalar> divide(const Gaussian<Scalar> & a, const Gaussian<Scalar> & b)
{
    using Real = RealOf_t<Scalar>;
    if (b.isVague() || a.isDelta()) return a;
    if (b.isDelta()) return Gaussian<Scalar>::vague(a.mean);

    const Real pa = Real(1) / a.var;
    const Real pb = Real(1) / b.var;
    const Real p = pa - pb;
    if (!(p > Real(0)))
        return Gaussian<Scalar>::vague(a.mean);
    const Real var = Real(1) / p;
    const Scalar mean = var * (pa * a.mean - pb * b.mean);
    return {mean, clampVariance(var)};
}

// Affine map x -> s*x + c. The scale is real.
template <typename Scalar>
Gaussian<Scalar> affine(const Gaussian<Scalar> & g, RealOf_t<Scalar> s, Scalar c = Scalar{})
{
    return {s * g.mean + c, s * s * g.var};
}

// Damped blend in natural parameters; w = 0 returns fresh.
template <typename Scalar>
Gaussian<Scalar> blend(const Gaussian<Scalar> & fresh, const Gaussian<Scalar> & old, RealOf_t<Scalar> w)
{
    using Real = RealOf_t<Scalar>;
    if (w <= Real(0) || old.isDelta() || fresh.isDelta()) return fresh;
    const Real pf = Real(1) / fresh.var;
    const Real po = Real(1) / old.var;
    const Real p = (Real(1) - w) * pf + w * po;
    const Scalar eta = (Real(1) - w) * pf * fresh.mean + w * po * old.mean;
    return {eta / p, clampVariance(Real(1) / p)};
}

namespace detail {

template <typename Real>
Real outputVariance(Real v, Real inputVar)
{
    if (inputVar == Real(0)) return Real(0);
    if (!std::isfinite(v)) return Real(VAR_MAX);
    return clampVariance(v);
}

// Mean and variance of b0 + b1 z + b2 z^2 + b3 z^3 for z ~ N(0, lambda).
template <typename Real>
Gaussian<Real> cubicMoments(Real b0, Real b1, Real b2, Real b3, Real lambda)
{
    const Real l2 = lambda * lambda;
    const Real mean = b0 + b2 * lambda;
    const Real var = b1 * b1 * lambda + (Real(6) * b1 * b3 + Real(2) * b2 * b2) * l2
                   + Real(15) * b3 * b3 * l2 * lambda;
    return {mean, var};
}

// Taylor coefficients of an inverse trig function about c, as a cubic in (x - c),
// then evaluated in moments about the mean of x.
template <typename Real>
Gaussian<Real> inverseTrigMoments(const Gaussian<Real> & x, Real c, bool isArccos)
{
    const Real lim = Real(0.999999);
    const Real m = std::clamp(x.mean, -lim, lim);
    c = std::clamp(c, -lim, lim);
    const Real s = Real(1) - c * c;
    const Real rs = std::sqrt(s);
    // asin derivatives about c; arccos is pi/2 - asin.
    Real a0 = std::asin(c);
    Real a1 = Real(1) / rs;
    Real a2 = c / (s * rs) / Real(2);
    Real a3 = (Real(1) + Real(2) * c * c) / (s * s * rs) / Real(6);
    if (isArccos)
    {
        a0 = std::numbers::pi_v<Real> / Real(2) - a0;
        a1 = -a1;
        a2 = -a2;
        a3 = -a3;
    }
    const Real h = m - c;
    const Real b0 = a0 + h * (a1 + h * (a2 + h * a3));
    const Real b1 = a1 + h * (Real(2) * a2 + Real(3) * a3 * h);
    const Real b2 = a2 + Real(3) * a3 * h;
    const Real b3 = a3;
    Gaussian<Real> out = cubicMoments(b0, b1, b2, b3, x.var);
    out.var = outputVariance(out.var, x.var);
    return out;
}

} // namespace detail

/**
 * @brief Moments of cos(x) for x ~ N(m, lambda). Exact.
 */
template <typename Real>
Gaussian<Real> cos_moments(const Gaussian<Real> & x)
{
    const Real m = x.mean, l = x.var;
    const Real c = std::cos(m);
    const Real mean = std::exp(-l / Real(2)) * c;
    const Real var = Real(0.5) + Real(0.5) * std::exp(Real(-2) * l) * std::cos(Real(2) * m)
                   - std::exp(-l) * c * c;
    return {mean, detail::outputVariance(var, l)};
}

/**
 * @brief Moments of sin(x) for x ~ N(m, lambda). Exact.
 */
template <typename Real>
Gaussian<Real> sin_moments(const Gaussian<Real> & x)
{
    const Real m = x.mean, l = x.var;
    const Real s = std::sin(m);
    const Real mean = std::exp(-l / Real(2)) * s;
    const Real var = Real(0.5) - Real(0.5) * std::exp(Real(-2) * l) * std::cos(Real(2) * m)
                   - std::exp(-l) * s * s;
    return {mean, detail::outputVariance(var, l)};
}

/**
 * @brief Moments of exp(-j q x) for x ~ N(m, lambda). Exact.
 *
 * Mean exp(-q^2 lambda / 2) exp(-j q m), variance 1 - exp(-q^2 lambda).
 */
template <typename Real>
Gaussian<std::complex<Real>> cis_moments(int q, const Gaussian<Real> & x)
{
    const Real qq = Real(q) * Real(q);
    const Real mag = std::exp(-qq * x.var / Real(2));
    const std::complex<Real> mean = std::polar(mag, -Real(q) * x.mean);
    const Real var = -std::expm1(-qq * x.var);
    return {mean, detail::outputVariance(var, q == 0 ? Real(0) : x.var)};
}

/**
 * @brief Moments of arccos(x) under the cubic expansion about c.
 *
 * The one-argument form expands about zero: pi/2 - x - x^3/6. The mean of x
 * and the expansion point are clamped to [-0.999999, 0.999999].
 */
template <typename Real>
Gaussian<Real> arccos_moments(const Gaussian<Real> & x, Real c)
{
    return detail::inverseTrigMoments(x, c, true);
}

template <typename Real>
Gaussian<Real> arccos_moments(const Gaussian<Real> & x)
{
    return arccos_moments(x, Real(0));
}

/**
 * @brief Moments of arcsin(x) under the cubic expansion about c.
 *
 * About zero this is x + x^3/6, mean m (1 + lambda/2 + m^2/6).
 */
template <typename Real>
Gaussian<Real> arcsin_moments(const Gaussian<Real> & x, Real c)
{
    return detail::inverseTrigMoments(x, c, false);
}

template <typename Real>
Gaussian<Real> arcsin_moments(const Gaussian<Real> & x)
{
    return arcsin_moments(x, Real(0));
}

/**
 * @brief Extrinsic message through a nonlinear map.
 *
 * Pushes the posterior cavity*msg and the cavity alone through the same
 * moment map and divides. Systematic distortion of the map cancels, so a
 * message carrying no information maps to a vague one.
 */
template <typename Real, typename Map>
Gaussian<Real> mapExtrinsic(const Gaussian<Real> & cavity, const Gaussian<Real> & msg, Map map)
{
    if (msg.isVague()) return Gaussian<Real>::vague(map(cavity).mean);
    const Gaussian<Real> post = product(cavity, msg);
    return divide(map(post), map(cavity));
}

} // namespace dfrc

#endif
