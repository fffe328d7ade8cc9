#include "catch_amalgamated.hpp"

#include <cmath>
#include <numbers>

#include "dfrc/observation.hpp"

using namespace dfrc;
using Catch::Approx;

constexpr double pi = std::numbers::pi;

namespace {

ScenarioConfig noiseless()
{
    ScenarioConfig cfg;
    cfg.sigmaTau = 0;
    cfg.sigmaGamma = 0;
    cfg.sigmaY = 0;
    return cfg;
}

} // namespace

TEST_CASE("steering vectors", "[observation]")
{
    const Eigen::VectorXcd a = steering(pi / 2, 4);
    for (int i = 0; i < 4; ++i)
    {
        CHECK(a(i).real() == Approx(0.5));
        CHECK(a(i).imag() == Approx(0.0).margin(1e-15));
    }

    const std::complex<double> ip = steering(pi / 3, 2).dot(steering(2 * pi / 3, 2));
    CHECK(std::abs(ip) < 1e-15);

    const Eigen::VectorXcd z = steering(0.0, 3);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(z(i) - std::polar(1 / std::sqrt(3.0), -pi * i)) < 1e-15);
}

TEST_CASE("noise-free delay and Doppler", "[observation]")
{
    const ScenarioConfig cfg = noiseless();
    CounterRng rng(1);
    CHECK(observe_delay(100, cfg, rng) == Approx(6.6666666667e-7).epsilon(1e-9));
    CHECK(observe_delay(0, cfg, rng) == 0.0);
    CHECK(observe_doppler(20, pi / 3, cfg, rng) == Approx(2000.0).epsilon(1e-12));
    CHECK(observe_doppler(20, pi / 2, cfg, rng) == Approx(0.0).margin(1e-9));
    CHECK(observe_doppler(0, 1.0, cfg, rng) == 0.0);
}

TEST_CASE("broadside array samples", "[observation]")
{
    ScenarioConfig cfg = noiseless();
    cfg.Nt = 4;
    cfg.Nr = 2;
    CounterRng rng(1);
    const Eigen::VectorXcd y = observe_array({100, pi / 2, 10, {0.05, 0.05}}, pi / 2, cfg, rng);
    REQUIRE(y.size() == 2);
    for (int l = 0; l < 2; ++l)
    {
        CHECK(y(l).real() == Approx(0.1));
        CHECK(y(l).imag() == Approx(0.1));
    }
}

TEST_CASE("beam steered at an orthogonal angle sees nothing", "[observation]")
{
    ScenarioConfig cfg = noiseless();
    cfg.Nt = 2;
    cfg.Nr = 2;
    CounterRng rng(1);
    const Eigen::VectorXcd y = observe_array({100, pi / 3, 10, {0.05, 0.05}}, 2 * pi / 3, cfg, rng);
    CHECK(y.norm() < 1e-15);
}

TEST_CASE("aligned beam gives constant element magnitude", "[observation][property]")
{
    const ScenarioConfig cfg = noiseless();
    CounterRng rng(1);
    const std::complex<double> beta{0.03, -0.02};
    const Eigen::VectorXcd y = observe_array({60, 1.1, 10, beta}, 1.1, cfg, rng);
    const double expected = std::abs(beta) * std::sqrt(cfg.e / cfg.Nt) * cfg.Nt;
    for (int l = 0; l < cfg.Nr; ++l)
        CHECK(std::abs(y(l)) == Approx(expected).epsilon(1e-12));
}

TEST_CASE("array noise power matches sigma_y squared", "[observation][property]")
{
    ScenarioConfig cfg;
    cfg.sigmaY = 0.7;
    cfg.Nr = 1;
    CounterRng rng(99);
    const VehicleState s{100, 1.0, 10, {0, 0}};
    double acc = 0.0;
    const int n = 100000;
    for (int k = 0; k < n; ++k)
        acc += std::norm(observe_array(s, 1.0, cfg, rng)(0));
    CHECK(acc / n == Approx(cfg.sigmaY * cfg.sigmaY).epsilon(0.03));
}

TEST_CASE("observations are pure in their stream key", "[observation]")
{
    ScenarioConfig cfg;
    const VehicleState s{90, 1.2, 15, {0.05, 0.05}};
    const Observation a = observe(s, 1.19, cfg, {42, 3, 1, 7});
    const Observation b = observe(s, 1.19, cfg, {42, 3, 1, 7});
    const Observation c = observe(s, 1.19, cfg, {42, 3, 1, 8});
    CHECK(a.tau == b.tau);
    CHECK(a.gamma == b.gamma);
    CHECK(a.y == b.y);
    CHECK(a.tau != c.tau);
    CHECK(a.y.size() == cfg.Nr);
    CHECK(a.y.allFinite());
}

TEST_CASE("radar noise scales with range when a reference is set", "[observation]")
{
    ScenarioConfig cfg;
    CHECK(delay_sigma(50, cfg) == cfg.sigmaTau);
    cfg.radarRefRange = 10;
    CHECK(delay_sigma(50, cfg) == Approx(5 * cfg.sigmaTau));
    CHECK(doppler_sigma(20, cfg) == Approx(2 * cfg.sigmaGamma));
}
