#include "catch_amalgamated.hpp"

#include <cmath>
#include <numbers>

#include "dfrc/gaussian.hpp"
#include "dfrc/rng.hpp"

using namespace dfrc;
using Catch::Approx;

constexpr double pi = std::numbers::pi;

TEST_CASE("product of equal-precision messages", "[gaussian]")
{
    const GaussianR a = product(GaussianR{0, 1}, GaussianR{0, 1});
    CHECK(a.mean == 0.0);
    CHECK(a.var == Approx(0.5));

    const GaussianR b = product(GaussianR{1, 1}, GaussianR{3, 1});
    CHECK(b.mean == Approx(2.0));
    CHECK(b.var == Approx(0.5));
}

TEST_CASE("a vague operand leaves the product unchanged", "[gaussian]")
{
    const GaussianR a = product(GaussianR{2, 0.1}, GaussianR{0, 1e9});
    CHECK(a.mean == Approx(2.0).epsilon(1e-8));
    CHECK(a.var == Approx(0.1).epsilon(1e-8));
}

TEST_CASE("point masses", "[gaussian]")
{
    const GaussianR a = product(GaussianR::delta(1.5), GaussianR{0, 2});
    CHECK(a.mean == 1.5);
    CHECK(a.var == 0.0);
    CHECK_NOTHROW(product(GaussianR::delta(1.0), GaussianR::delta(1.0)));
    CHECK_THROWS_WITH(product(GaussianR::delta(1.0), GaussianR::delta(2.0)), "inconsistent delta messages");
}

TEST_CASE("divide inverts product", "[gaussian]")
{
    const GaussianR a = divide(GaussianR{2, 0.5}, GaussianR{3, 1});
    CHECK(a.mean == Approx(1.0));
    CHECK(a.var == Approx(1.0));

    const GaussianR b{0.7, 0.3};
    const GaussianR c = divide(b, GaussianR::vague());
    CHECK(c.mean == b.mean);
    CHECK(c.var == b.var);

    const GaussianR d = divide(GaussianR{0, 1}, GaussianR{0, 0.5});
    CHECK(d.isVague());
}

TEST_CASE("randomized algebra properties", "[gaussian][property]")
{
    CounterRng rng(7);
    for (int i = 0; i < 2000; ++i)
    {
        const GaussianC a{{rng.normal(0, 3), rng.normal(0, 3)}, std::exp(rng.uniform(-5, 5))};
        const GaussianC b{{rng.normal(0, 3), rng.normal(0, 3)}, std::exp(rng.uniform(-5, 5))};
        const GaussianC c{{rng.normal(0, 3), rng.normal(0, 3)}, std::exp(rng.uniform(-5, 5))};

        const GaussianC ab = product(a, b), ba = product(b, a);
        CHECK(std::abs(ab.mean - ba.mean) <= 1e-12 * (1 + std::abs(ab.mean)));
        CHECK(ab.var == Approx(ba.var).epsilon(1e-12));

        const GaussianC l = product(product(a, b), c), r = product(a, product(b, c));
        CHECK(std::abs(l.mean - r.mean) <= 1e-12 * (1 + std::abs(l.mean)) * 10);
        CHECK(l.var == Approx(r.var).epsilon(1e-12));

        const GaussianC back = divide(ab, b);
        CHECK(std::abs(back.mean - a.mean) <= 1e-9 * (1 + std::abs(a.mean)));
        CHECK(back.var == Approx(a.var).epsilon(1e-9));
    }
}

TEST_CASE("cos and sin moments", "[gaussian]")
{
    const GaussianR z = cos_moments(GaussianR{0, 0});
    CHECK(z.mean == 1.0);
    CHECK(z.var == 0.0);

    const GaussianR c = cos_moments(GaussianR{pi / 4, 0.01});
    CHECK(c.mean == Approx(0.7035800714).epsilon(1e-9));
    CHECK(c.var == Approx(0.0049750831).epsilon(1e-8));

    const GaussianR wide = cos_moments(GaussianR{0.3, 1e4});
    CHECK(wide.mean == Approx(0.0).margin(1e-12));
    CHECK(wide.var == Approx(0.5).epsilon(1e-12));

    // cos^2 + sin^2 = 1 in expectation
    const GaussianR x{0.9, 0.2};
    const GaussianR s = sin_moments(x);
    const GaussianR k = cos_moments(x);
    CHECK(s.var + s.mean * s.mean + k.var + k.mean * k.mean == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("arccos moments", "[gaussian]")
{
    const GaussianR a = arccos_moments(GaussianR{0, 0});
    CHECK(a.mean == Approx(pi / 2));
    CHECK(a.var == 0.0);

    const GaussianR b = arccos_moments(GaussianR{0.5, 0.01});
    CHECK(b.mean == Approx(1.0474629935).epsilon(1e-9));
    CHECK(b.var == Approx(0.0127816667).epsilon(1e-8));

    const GaussianR edge = arccos_moments(GaussianR{0.9999, 1e-8});
    CHECK(std::isfinite(edge.mean));
    CHECK(std::isfinite(edge.var));
    CHECK(edge.mean == Approx(0.4042799).epsilon(1e-6));
}

TEST_CASE("arccos small-variance limit is the cubic", "[gaussian][property]")
{
    for (double m = -0.6; m <= 0.6; m += 0.05)
    {
        const GaussianR a = arccos_moments(GaussianR{m, 1e-14});
        CHECK(a.mean == Approx(pi / 2 - m - m * m * m / 6).epsilon(1e-12));
        CHECK(std::abs(a.mean - std::acos(m)) < 0.01);
    }
}

TEST_CASE("centered expansions track the true function", "[gaussian]")
{
    const GaussianR a = arccos_moments(GaussianR{0.8, 1e-14}, 0.8);
    CHECK(a.mean == Approx(std::acos(0.8)).epsilon(1e-12));
    const GaussianR s = arcsin_moments(GaussianR{-0.7, 1e-14}, -0.7);
    CHECK(s.mean == Approx(std::asin(-0.7)).epsilon(1e-12));
}

TEST_CASE("arcsin moments", "[gaussian]")
{
    const GaussianR z = arcsin_moments(GaussianR{0, 0});
    CHECK(z.mean == 0.0);
    CHECK(z.var == 0.0);

    const GaussianR a = arcsin_moments(GaussianR{0.3, 0.01});
    CHECK(a.mean == Approx(0.306).epsilon(1e-12));
    CHECK(a.var == Approx(0.0110296667).epsilon(1e-8));

    const GaussianR n = arcsin_moments(GaussianR{-0.3, 0.01});
    CHECK(n.mean == Approx(-a.mean));
    CHECK(n.var == Approx(a.var));
}

TEST_CASE("cis moments", "[gaussian]")
{
    const GaussianC z = cis_moments(0, GaussianR{1.3, 0.4});
    CHECK(z.mean == std::complex<double>(1.0, 0.0));
    CHECK(z.var == 0.0);

    const GaussianC a = cis_moments(2, GaussianR{0.5, 0.01});
    CHECK(a.mean.real() == Approx(0.5296036034).epsilon(1e-9));
    CHECK(a.mean.imag() == Approx(-0.8248087429).epsilon(1e-9));
    CHECK(a.var == Approx(0.0392105608).epsilon(1e-8));

    const GaussianC w = cis_moments(1, GaussianR{0, 1e4});
    CHECK(std::abs(w.mean) < 1e-12);
    CHECK(w.var == Approx(1.0));
}

TEST_CASE("outputs respect the variance floor", "[gaussian][property]")
{
    for (double l : {1e-20, 1e-10, 1e-3, 0.5})
    {
        const GaussianR x{0.4, l};
        CHECK(cos_moments(x).var >= VAR_FLOOR);
        CHECK(sin_moments(x).var >= VAR_FLOOR);
        CHECK(arccos_moments(x).var >= VAR_FLOOR);
        CHECK(arcsin_moments(x).var >= VAR_FLOOR);
        CHECK(cis_moments(3, x).var >= VAR_FLOOR);
    }
}

TEST_CASE("mapExtrinsic of an uninformative message is vague", "[gaussian]")
{
    auto map = [](const GaussianR & g) { return arccos_moments(g, g.mean); };
    const GaussianR m = mapExtrinsic(GaussianR{0.3, 0.01}, GaussianR::vague(), map);
    CHECK(m.isVague());

    // A sharp message dominates and lands near arccos of its mean.
    const GaussianR s = mapExtrinsic(GaussianR{0.3, 0.01}, GaussianR{0.5, 1e-8}, map);
    CHECK(s.mean == Approx(std::acos(0.5)).epsilon(1e-4));
}

TEST_CASE("blend", "[gaussian]")
{
    const GaussianR f{1, 1}, o{3, 1};
    const GaussianR b0 = blend(f, o, 0.0);
    CHECK(b0.mean == 1.0);
    const GaussianR h = blend(f, o, 0.5);
    CHECK(h.mean == Approx(2.0));
    CHECK(h.var == Approx(1.0));
}
