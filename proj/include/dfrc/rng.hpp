#ifndef DFRC_RNG_HPP
#define DFRC_RNG_HPP

#include <complex>
#include <cstdint>
#include <limits>
#include <random>

namespace dfrc {

enum class Purpose : std::uint64_t
{
    Speed = 1,
    Prior,
    Truth,
    Delay,
    Doppler,
    Array,
    Filter,
    Test
};

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/**
 * @brief Counter-based generator. Each (seed, trial, vehicle, slot, purpose)
 * tuple is an independent stream, so draws do not depend on scheduling order.
 *
 * Satisfies UniformRandomBitGenerator.
 */
class CounterRng
{
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed = 0)
        : key_(splitmix64(seed))
    {}

    CounterRng(std::uint64_t seed, std::uint64_t trial, std::uint64_t vehicle,
               std::uint64_t slot, Purpose purpose)
    {
        std::uint64_t k = splitmix64(seed);
        k = splitmix64(k ^ trial);
        k = splitmix64(k ^ (vehicle + 0x1000));
        k = splitmix64(k ^ (slot + 0x100000));
        key_ = splitmix64(k ^ static_cast<std::uint64_t>(purpose));
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return splitmix64(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

    double normal(double mean = 0.0, double stddev = 1.0)
    {
        if (stddev == 0.0) return mean;
        std::normal_distribution<double> dist(mean, stddev);
        return dist(*this);
    }

    // Circular complex normal with total variance var (var/2 per quadrature).
    std::complex<double> complexNormal(double var)
    {
        if (var == 0.0) return {};
        const double s = std::sqrt(var / 2.0);
        return {normal(0.0, s), normal(0.0, s)};
    }

    double uniform(double a = 0.0, double b = 1.0)
    {
        std::uniform_real_distribution<double> dist(a, b);
        return dist(*this);
    }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

} // namespace dfrc

#endif
