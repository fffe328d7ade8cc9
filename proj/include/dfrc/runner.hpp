#ifndef DFRC_RUNNER_HPP
#define DFRC_RUNNER_HPP

#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include "dfrc/config.hpp"
#include "dfrc/gaussian.hpp"

namespace dfrc {

enum class TrackerKind
{
    Proposed,
    Ekf,
    Pf,
    Feedback
};

std::string to_string(TrackerKind k);
TrackerKind parse_tracker(const std::string & name);
std::vector<TrackerKind> parse_tracker_list(const std::string & list);

struct SlotRecord
{
    int trial = 0;
    int slot = 0;
    int vehicle = 0;
    TrackerKind tracker = TrackerKind::Proposed;
    double dTrue = 0, dEst = 0;
    double thetaTrue = 0, thetaEst = 0;
    double vTrue = 0, vEst = 0;
    std::complex<double> betaEst{};
    GaussianR rsuPred;
    GaussianR vehiclePred;
    double snr = 0, rate = 0, pMis = 0;
    double initialSpeed = 0;
};

struct TrialResult
{
    std::vector<SlotRecord> records;
    bool excluded = false;
    bool degenerate = false;
};

struct CampaignResult
{
    std::vector<TrackerKind> trackers;
    std::vector<SlotRecord> records;    // trial, slot, vehicle, tracker order
    int trials = 0;
    int excluded = 0;
    int degenerate = 0;
};

TrialResult run_trial(const ScenarioConfig & cfg, const std::vector<TrackerKind> & trackers, int trial);

// Trials fan out over cfg.threads workers (0: hardware concurrency); merge is in trial order.
CampaignResult run_campaign(const ScenarioConfig & cfg, const std::vector<TrackerKind> & trackers);

struct TrackerSummary
{
    TrackerKind tracker;
    double rmseD = 0, rmseTheta = 0, rmseV = 0;
    double meanRate = 0, meanPMis = 0;
    double medianFinalAngleError = 0;
};

std::vector<TrackerSummary> summarize(const CampaignResult & r);

// Per-slot RMSE across trials and vehicles for one tracker; param in {d, theta, v}.
std::vector<double> rmse_per_slot(const CampaignResult & r, TrackerKind k, const std::string & param, int nSlots);

extern const char * const TRACE_HEADER;

void write_trace(std::ostream & os, const CampaignResult & r, TrackerKind k);
void write_summary(std::ostream & os, const CampaignResult & r, const std::vector<TrackerSummary> & s);
void print_table(std::ostream & os, const CampaignResult & r, const std::vector<TrackerSummary> & s);

// rmse_vs_slot, cdf_speed_error, cdf_angle_error, cdf_rate, pmis_vs_slot
void emit_figures(const std::string & dir, const CampaignResult & r, const ScenarioConfig & cfg);

struct RunSpec
{
    ScenarioConfig cfg;
    std::vector<TrackerKind> trackers{TrackerKind::Proposed, TrackerKind::Ekf};
    std::string outDir = "out";
    bool emitFigures = false;
};

// Returns the process exit status: 0 ok, 3 degeneracy beyond threshold.
int run(const RunSpec & spec, std::ostream & log);

} // namespace dfrc

#endif
