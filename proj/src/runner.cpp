#include "dfrc/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "dfrc/baselines.hpp"
#include "dfrc/metrics.hpp"
#include "dfrc/observation.hpp"
#include "dfrc/scenario.hpp"
#include "dfrc/tracker.hpp"

namespace dfrc {

const char * const TRACE_HEADER =
    "trial,slot,vehicle,tracker,d_true,d_est,theta_true,theta_est,v_true,v_est,beta_re_est,beta_im_est,"
    "theta_pred_rsu,theta_pred_vehicle,snr,rate,p_mis";

std::string to_string(TrackerKind k)
{
    switch (k)
    {
    case TrackerKind::Proposed: return "proposed";
    case TrackerKind::Ekf: return "ekf";
    case TrackerKind::Pf: return "pf";
    case TrackerKind::Feedback: return "feedback";
    }
    return "?";
}

TrackerKind parse_tracker(const std::string & name)
{
    if (name == "proposed") return TrackerKind::Proposed;
    if (name == "ekf") return TrackerKind::Ekf;
    if (name == "pf") return TrackerKind::Pf;
    if (name == "feedback") return TrackerKind::Feedback;
    throw ConfigError("unknown tracker '" + name + "' (expected proposed, ekf, pf, feedback)");
}

std::vector<TrackerKind> parse_tracker_list(const std::string & list)
{
    std::vector<TrackerKind> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        const TrackerKind k = parse_tracker(item);
        if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
    }
    if (out.empty()) throw ConfigError("empty tracker list");
    return out;
}

namespace {

constexpr double pi = std::numbers::pi;

struct Lane
{
    TrackerKind kind;
    ScenarioConfig cfg;
    BeliefSet last;
    GaussianR vehicleBeam[2];   // for the current and the next slot
    EkfState ekf;
    ParticleCloud pf;
};

void attachPredictions(BeliefSet & b, const ScenarioConfig & cfg)
{
    b.thetaPredRsu = rsu_predicted_angle(predict(b, cfg).theta);
    b.thetaPredVehicle = two_step_angle(b, b.thetaPredRsu, cfg);
}

BeliefSet drawPrior(const VehicleState & s, const ScenarioConfig & cfg, CounterRng & rng)
{
    BeliefSet b;
    b.d = {rng.normal(s.d, cfg.priorSigmaD), cfg.priorSigmaD * cfg.priorSigmaD};
    b.theta = {std::clamp(rng.normal(s.theta, cfg.priorSigmaTheta), 0.01, pi - 0.01),
               cfg.priorSigmaTheta * cfg.priorSigmaTheta};
    b.v = {rng.normal(s.v, cfg.priorSigmaV), cfg.priorSigmaV * cfg.priorSigmaV};
    b.d.mean = std::max(b.d.mean, cfg.d0);
    b.beta = {reflection_coefficient(b.d.mean, cfg.xi), cfg.priorSigmaBeta * cfg.priorSigmaBeta};
    for (GaussianR * g : {&b.d, &b.theta, &b.v})
        g->var = std::max(g->var, VAR_FLOOR);
    b.beta.var = std::max(b.beta.var, VAR_FLOOR);
    attachPredictions(b, cfg);
    return b;
}

ScenarioConfig laneConfig(const ScenarioConfig & cfg, TrackerKind k)
{
    ScenarioConfig c = cfg;
    if (k == TrackerKind::Feedback)
        c.sigmaY *= std::sqrt(cfg.feedbackNoiseFactor);
    return c;
}

} // namespace

TrialResult run_trial(const ScenarioConfig & cfg, const std::vector<TrackerKind> & trackers, int trial)
{
    TrialResult out;
    const int K = cfg.K();
    const double delta = pi / cfg.Nt;

    for (int k = 0; k < K; ++k)
    {
        CounterRng speedRng(cfg.seed, trial, k, 0, Purpose::Speed);
        const double v0 = speedRng.uniform(cfg.speedMin, cfg.speedMax);
        VehicleState truth = initial_state(cfg.positions[k][0], cfg.positions[k][1], v0, cfg.xi);

        CounterRng priorRng(cfg.seed, trial, k, 0, Purpose::Prior);
        const BeliefSet prior = drawPrior(truth, cfg, priorRng);

        std::vector<Lane> lanes;
        for (TrackerKind kind : trackers)
        {
            Lane lane{kind, laneConfig(cfg, kind), prior, {}, {}, {}};
            lane.vehicleBeam[0] = {prior.thetaPredRsu, prior.theta.var + cfg.sigmaTheta * cfg.sigmaTheta};
            lane.vehicleBeam[1] = prior.thetaPredVehicle;
            if (kind == TrackerKind::Ekf) lane.ekf = ekf_from_beliefs(prior);
            if (kind == TrackerKind::Pf)
            {
                CounterRng r(cfg.seed, trial, k, 0, Purpose::Filter);
                lane.pf = pf_init(prior, cfg.pfParticles, r);
            }
            lanes.push_back(std::move(lane));
        }

        for (int n = 0; n < cfg.nSlots; ++n)
        {
            CounterRng truthRng(cfg.seed, trial, k, n + 1, Purpose::Truth);
            try
            {
                truth = step_truth(truth, cfg, truthRng);
            }
            catch (const CoverageError &)
            {
                out.excluded = true;
                out.records.clear();
                return out;
            }

            for (std::size_t t = 0; t < lanes.size(); ++t)
            {
                Lane & lane = lanes[t];
                const ScenarioConfig & lc = lane.cfg;
                const double beam = lane.last.thetaPredRsu;
                const GaussianR rsuPred{beam, lane.last.theta.var + cfg.sigmaTheta * cfg.sigmaTheta};
                const GaussianR vehPred = lane.vehicleBeam[0];

                const Observation obs = observe(truth, beam, lc, {cfg.seed, std::uint64_t(trial), std::uint64_t(k),
                                                                  std::uint64_t(n + 1)});
                BeliefSet b;
                switch (lane.kind)
                {
                case TrackerKind::Proposed:
                case TrackerKind::Feedback:
                    b = FactorGraphTracker(lc).track_step(obs, lane.last);
                    break;
                case TrackerKind::Ekf:
                    lane.ekf = ekf_step(lane.ekf, obs, beam, lc);
                    b = ekf_to_beliefs(lane.ekf, lc);
                    break;
                case TrackerKind::Pf:
                {
                    CounterRng r(cfg.seed, trial, k, n + 1, Purpose::Filter);
                    pf_step(lane.pf, obs, beam, lc, r);
                    b = pf_estimate(lane.pf);
                    attachPredictions(b, lc);
                    if (lane.pf.degenerate) out.degenerate = true;
                    break;
                }
                }

                SlotRecord rec;
                rec.trial = trial;
                rec.slot = n;
                rec.vehicle = k;
                rec.tracker = lane.kind;
                rec.dTrue = truth.d;
                rec.dEst = b.d.mean;
                rec.thetaTrue = truth.theta;
                rec.thetaEst = b.theta.mean;
                rec.vTrue = truth.v;
                rec.vEst = b.v.mean;
                rec.betaEst = b.beta.mean;
                rec.rsuPred = rsuPred;
                rec.vehiclePred = vehPred;
                rec.snr = snr(truth.theta, beam, vehPred.mean, pathloss(truth.d, cfg), cfg.e, cfg);
                rec.rate = rate(rec.snr);
                rec.pMis = misalignment_prob(truth.theta, vehPred, rsuPred, delta);
                rec.initialSpeed = v0;
                out.records.push_back(rec);

                lane.vehicleBeam[0] = lane.vehicleBeam[1];
                lane.vehicleBeam[1] = b.thetaPredVehicle;
                lane.last = b;
            }
        }
    }

    std::stable_sort(out.records.begin(), out.records.end(), [](const SlotRecord & a, const SlotRecord & b) {
        return std::tie(a.slot, a.vehicle) < std::tie(b.slot, b.vehicle);
    });
    return out;
}

CampaignResult run_campaign(const ScenarioConfig & cfg, const std::vector<TrackerKind> & trackers)
{
    std::vector<TrialResult> results(cfg.nTrials);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int t = next++; t < cfg.nTrials; t = next++)
            results[t] = run_trial(cfg, trackers, t);
    };
    int nThreads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
    nThreads = std::clamp(nThreads, 1, cfg.nTrials);
    if (nThreads == 1)
        worker();
    else
    {
        std::vector<std::jthread> pool;
        for (int i = 0; i < nThreads; ++i) pool.emplace_back(worker);
    }

    CampaignResult r;
    r.trackers = trackers;
    r.trials = cfg.nTrials;
    for (TrialResult & t : results)
    {
        r.excluded += t.excluded;
        r.degenerate += t.degenerate;
        r.records.insert(r.records.end(), t.records.begin(), t.records.end());
    }
    return r;
}

namespace {

double paramError(const SlotRecord & s, const std::string & param)
{
    if (param == "d") return s.dEst - s.dTrue;
    if (param == "theta") return s.thetaEst - s.thetaTrue;
    if (param == "v") return s.vEst - s.vTrue;
    throw std::invalid_argument("unknown parameter '" + param + "'");
}

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

int lastSlot(const CampaignResult & r)
{
    int s = -1;
    for (const SlotRecord & x : r.records) s = std::max(s, x.slot);
    return s;
}

} // namespace

std::vector<double> rmse_per_slot(const CampaignResult & r, TrackerKind k, const std::string & param, int nSlots)
{
    std::vector<double> sum(nSlots, 0.0);
    std::vector<int> cnt(nSlots, 0);
    for (const SlotRecord & s : r.records)
    {
        if (s.tracker != k || s.slot >= nSlots) continue;
        const double e = paramError(s, param);
        sum[s.slot] += e * e;
        ++cnt[s.slot];
    }
    std::vector<double> out(nSlots, 0.0);
    for (int i = 0; i < nSlots; ++i)
        out[i] = cnt[i] ? std::sqrt(sum[i] / cnt[i]) : 0.0;
    return out;
}

std::vector<TrackerSummary> summarize(const CampaignResult & r)
{
    const int last = lastSlot(r);
    std::vector<TrackerSummary> out;
    for (TrackerKind k : r.trackers)
    {
        std::vector<double> ed, et, ev, finalAngle;
        double rateSum = 0, pSum = 0;
        for (const SlotRecord & s : r.records)
        {
            if (s.tracker != k) continue;
            ed.push_back(s.dEst - s.dTrue);
            et.push_back(s.thetaEst - s.thetaTrue);
            ev.push_back(s.vEst - s.vTrue);
            rateSum += s.rate;
            pSum += s.pMis;
            if (s.slot == last) finalAngle.push_back(std::abs(s.thetaEst - s.thetaTrue));
        }
        TrackerSummary ts{k};
        if (!ed.empty())
        {
            ts.rmseD = rmse(ed);
            ts.rmseTheta = rmse(et);
            ts.rmseV = rmse(ev);
            ts.meanRate = rateSum / ed.size();
            ts.meanPMis = pSum / ed.size();
            ts.medianFinalAngleError = median(finalAngle);
        }
        out.push_back(ts);
    }
    return out;
}

void write_trace(std::ostream & os, const CampaignResult & r, TrackerKind k)
{
    os << TRACE_HEADER << '\n';
    for (const SlotRecord & s : r.records)
    {
        if (s.tracker != k) continue;
        os << s.trial << ',' << s.slot << ',' << s.vehicle << ',' << to_string(s.tracker) << ',' << num(s.dTrue)
           << ',' << num(s.dEst) << ',' << num(s.thetaTrue) << ',' << num(s.thetaEst) << ',' << num(s.vTrue) << ','
           << num(s.vEst) << ',' << num(s.betaEst.real()) << ',' << num(s.betaEst.imag()) << ','
           << num(s.rsuPred.mean) << ',' << num(s.vehiclePred.mean) << ',' << num(s.snr) << ',' << num(s.rate)
           << ',' << num(s.pMis) << '\n';
    }
}

void write_summary(std::ostream & os, const CampaignResult & r, const std::vector<TrackerSummary> & s)
{
    os << "tracker,trials,excluded,degenerate,rmse_d,rmse_theta,rmse_v,mean_rate,mean_p_mis,median_final_angle_error\n";
    for (const TrackerSummary & t : s)
        os << to_string(t.tracker) << ',' << r.trials << ',' << r.excluded << ',' << r.degenerate << ','
           << num(t.rmseD) << ',' << num(t.rmseTheta) << ',' << num(t.rmseV) << ',' << num(t.meanRate) << ','
           << num(t.meanPMis) << ',' << num(t.medianFinalAngleError) << '\n';
}

void print_table(std::ostream & os, const CampaignResult & r, const std::vector<TrackerSummary> & s)
{
    os << "trials " << r.trials << "  excluded " << r.excluded << "  degenerate " << r.degenerate << '\n';
    os << std::left << std::setw(10) << "tracker" << std::right << std::setw(12) << "rmse_d" << std::setw(12)
       << "rmse_theta" << std::setw(12) << "rmse_v" << std::setw(12) << "rate" << std::setw(12) << "p_mis" << '\n';
    for (const TrackerSummary & t : s)
        os << std::left << std::setw(10) << to_string(t.tracker) << std::right << std::setprecision(4)
           << std::setw(12) << t.rmseD << std::setw(12) << t.rmseTheta << std::setw(12) << t.rmseV << std::setw(12)
           << t.meanRate << std::setw(12) << t.meanPMis << '\n';
}

void emit_figures(const std::string & dir, const CampaignResult & r, const ScenarioConfig & cfg)
{
    namespace fs = std::filesystem;
    const int last = lastSlot(r);
    const int nSlots = last + 1;

    {
        std::ofstream f(fs::path(dir) / "rmse_vs_slot.csv");
        f << "slot,tracker,param,rmse\n";
        for (TrackerKind k : r.trackers)
            for (const char * p : {"d", "theta", "v"})
            {
                const std::vector<double> e = rmse_per_slot(r, k, p, nSlots);
                for (int n = 0; n < nSlots; ++n)
                    f << n << ',' << to_string(k) << ',' << p << ',' << num(e[n]) << '\n';
            }
    }

    auto writeCdf = [&](const std::string & name, auto value, bool finalOnly) {
        std::ofstream f(fs::path(dir) / name);
        f << "tracker,value,cdf\n";
        for (TrackerKind k : r.trackers)
        {
            std::vector<double> xs;
            for (const SlotRecord & s : r.records)
                if (s.tracker == k && (!finalOnly || s.slot == last)) xs.push_back(value(s));
            for (const auto & [x, c] : empirical_cdf(xs))
                f << to_string(k) << ',' << num(x) << ',' << num(c) << '\n';
        }
    };
    writeCdf("cdf_speed_error.csv", [](const SlotRecord & s) { return std::abs(s.vEst - s.vTrue); }, true);
    writeCdf("cdf_angle_error.csv", [](const SlotRecord & s) { return std::abs(s.thetaEst - s.thetaTrue); }, true);

    {
        // sum rate over vehicles per (trial, slot)
        std::ofstream f(fs::path(dir) / "cdf_rate.csv");
        f << "tracker,value,cdf\n";
        for (TrackerKind k : r.trackers)
        {
            std::map<std::pair<int, int>, double> sums;
            for (const SlotRecord & s : r.records)
                if (s.tracker == k) sums[{s.trial, s.slot}] += s.rate;
            std::vector<double> xs;
            for (const auto & kv : sums) xs.push_back(kv.second);
            for (const auto & [x, c] : empirical_cdf(xs))
                f << to_string(k) << ',' << num(x) << ',' << num(c) << '\n';
        }
    }

    {
        std::ofstream f(fs::path(dir) / "pmis_vs_slot.csv");
        f << "slot,speed_class,delta,p_mis\n";
        if (r.trackers.empty()) return;
        const TrackerKind k = r.trackers.front();
        const char * classes[] = {"low", "mid", "high"};
        auto classOf = [&](double v) { return v >= cfg.highSpeedMin ? 2 : (v <= cfg.lowSpeedMax ? 0 : 1); };
        for (int n = 0; n < nSlots; ++n)
            for (int c = 0; c < 3; ++c)
                for (int N : cfg.beamwidthAntennas)
                {
                    const double delta = pi / N;
                    double sum = 0;
                    int cnt = 0;
                    for (const SlotRecord & s : r.records)
                        if (s.tracker == k && s.slot == n && classOf(s.initialSpeed) == c)
                        {
                            sum += misalignment_prob(s.thetaTrue, s.vehiclePred, s.rsuPred, delta);
                            ++cnt;
                        }
                    f << n << ',' << classes[c] << ',' << num(delta) << ',' << (cnt ? num(sum / cnt) : "nan")
                      << '\n';
                }
    }
}

int run(const RunSpec & spec, std::ostream & log)
{
    namespace fs = std::filesystem;
    spec.cfg.validate();
    fs::create_directories(spec.outDir);

    const CampaignResult r = run_campaign(spec.cfg, spec.trackers);
    const std::vector<TrackerSummary> s = summarize(r);

    for (TrackerKind k : spec.trackers)
    {
        std::ofstream f(fs::path(spec.outDir) / ("trace_" + to_string(k) + ".csv"));
        write_trace(f, r, k);
    }
    {
        std::ofstream f(fs::path(spec.outDir) / "summary.csv");
        write_summary(f, r, s);
    }
    if (spec.emitFigures)
        emit_figures(spec.outDir, r, spec.cfg);

    print_table(log, r, s);

    const double bad = static_cast<double>(r.excluded + r.degenerate) / std::max(1, r.trials);
    if (bad > spec.cfg.maxDegenerateFraction)
    {
        log << "degenerate or excluded trial fraction " << bad << " exceeds "
            << spec.cfg.maxDegenerateFraction << '\n';
        return 3;
    }
    return 0;
}

} // namespace dfrc
