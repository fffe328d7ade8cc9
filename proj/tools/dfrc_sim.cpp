// Monte Carlo campaign driver.
//
//   dfrc_sim --preset desk --trackers proposed,ekf --out out --emit-figures

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dfrc/config.hpp"
#include "dfrc/runner.hpp"

namespace {

constexpr int kConfigError = 2;

void parseAntennas(const std::string & s, dfrc::ScenarioConfig & cfg)
{
    std::stringstream ss(s);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c) )
        throw dfrc::ConfigError("--antennas expects NT,NR,M");
    try
    {
        cfg.Nt = std::stoi(a);
        cfg.Nr = std::stoi(b);
        cfg.M = std::stoi(c);
    }
    catch (const std::exception &)
    {
        throw dfrc::ConfigError("--antennas expects three integers NT,NR,M");
    }
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"DFRC predictive beamforming simulator"};

    std::string configPath, trackers = "proposed,ekf", out = "out", presetName = "desk", antennas;
    std::uint64_t seed = 0;
    int trials = 0, slots = 0, threads = -1;
    bool figures = false;

    app.add_option("--config", configPath, "YAML config overlaid on the preset");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--trackers", trackers, "comma list of proposed, ekf, pf, feedback");
    app.add_option("--trials", trials, "Monte Carlo trials");
    app.add_option("--slots", slots, "time slots per trial");
    app.add_option("--antennas", antennas, "NT,NR,M");
    app.add_option("--out", out, "output directory");
    app.add_option("--preset", presetName, "paper, desk or desk-fine-delay");
    app.add_option("--threads", threads, "worker threads, 0 for all cores");
    app.add_flag("--emit-figures", figures, "write plot-ready CSVs");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }

    dfrc::RunSpec spec;
    try
    {
        spec.cfg = dfrc::preset(presetName);
        if (!configPath.empty()) spec.cfg = dfrc::load_config(configPath, spec.cfg);
        if (app.count("--seed")) spec.cfg.seed = seed;
        if (trials > 0) spec.cfg.nTrials = trials;
        if (slots > 0) spec.cfg.nSlots = slots;
        if (threads >= 0) spec.cfg.threads = threads;
        if (!antennas.empty()) parseAntennas(antennas, spec.cfg);
        if (app.count("--trials") && trials <= 0) throw dfrc::ConfigError("--trials must be positive");
        if (app.count("--slots") && slots <= 0) throw dfrc::ConfigError("--slots must be positive");
        spec.cfg.validate();
        spec.trackers = dfrc::parse_tracker_list(trackers);
    }
    catch (const dfrc::ConfigError & e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    spec.outDir = out;
    spec.emitFigures = figures;

    try
    {
        return dfrc::run(spec, std::cout);
    }
    catch (const std::exception & e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
