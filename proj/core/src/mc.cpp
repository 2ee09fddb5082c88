#include "exitopt/mc.hpp"

#include "exitopt/bargaining.hpp"
#include "exitopt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace exitopt {

namespace detail {

StagePlan build_stage_plan(const DiscountSpec& d, AgentType agent,
                           std::span<const double> thresholds) {
    StagePlan plan;
    plan.thresholds.assign(thresholds.begin(), thresholds.end());
    const std::size_t n = thresholds.size();
    auto fail = [&](const char* what) {
        std::ostringstream os;
        os << "threshold list does not match agent chain: " << what << " (got "
           << n << " thresholds for " << to_string(agent) << ")";
        throw std::invalid_argument(os.str());
    };
    switch (agent) {
        case AgentType::Consistent:
            if (n != 1) fail("expected 1");
            plan.factors = {1.0};
            break;
        case AgentType::CriticalOnly:
            if (n != 2) fail("expected 2");
            plan.intensities = {d.lambdaE};
            plan.factors = {1.0, d.deltaP};
            break;
        case AgentType::Naive:
            if (n == 2) {
                plan.intensities = {d.lambdaPN};
                plan.factors = {1.0, d.deltaP};
            } else if (n == 3) {
                plan.intensities = {d.lambdaF, d.lambdaPN};
                plan.factors = {1.0, d.deltaF, d.deltaP};
            } else {
                fail("expected 2 or 3");
            }
            break;
        case AgentType::Sophisticated:
            if (n < 2) fail("expected >= 2");
            plan.intensities.assign(n - 2, d.lambdaF);
            plan.intensities.push_back(d.lambdaPS);
            plan.factors.assign(n, d.deltaF);
            plan.factors.front() = 1.0;
            plan.factors.back() = d.deltaP;
            break;
    }
    for (double t : plan.thresholds) {
        if (!(t > 0.0)) throw std::invalid_argument("thresholds must be > 0");
    }
    return plan;
}

}  // namespace detail

namespace {

using detail::StagePlan;

constexpr double kBridgeCut = 19.0;  // skip bridge when 2*u0*u1/(s2h) > ~38

void validate_sim(const SimConfig& cfg) {
    if (cfg.numPaths < 1) {
        throw std::invalid_argument("numPaths >= 1 violated");
    }
    if (!(cfg.timeStep > 0.0)) {
        throw std::invalid_argument("timeStep > 0 violated");
    }
    if (!(cfg.horizon > 0.0)) {
        throw std::invalid_argument("horizon > 0 violated");
    }
    if (cfg.antithetic && cfg.numPaths % 2 != 0) {
        throw std::invalid_argument("antithetic runs need an even numPaths");
    }
}

uint64_t stream_seed(uint64_t seed, uint64_t unit, uint64_t streamId) {
    return splitmix64(splitmix64(seed + streamId) + unit);
}

// Lazily materialized per-path time grid: segment boundaries are the union of
// the uniform step grid, the stage-transition times and the horizon. One
// normal increment is generated per segment, shared across threshold levels
// (common random numbers) and across antithetic legs (negated).
class PathSchedule {
public:
    PathSchedule(double dt, double horizon, double drift, double sigma)
        : dt_(dt), horizon_(horizon), cDrift_(drift), sigma_(sigma) {}

    void reset(Xoshiro256pp normals, const std::vector<double>& transitions) {
        normals_ = normals;
        transitions_ = &transitions;
        tEnd_.clear();
        drift_.clear();
        shock_.clear();
        sigma2h_.clear();
        transitionAfter_.clear();
        tCur_ = 0.0;
        gridIdx_ = 0;
        transIdx_ = 0;
    }

    // Returns false when the horizon is exhausted before segment i exists.
    bool ensure(std::size_t i) {
        while (tEnd_.size() <= i) {
            if (tCur_ >= horizon_) return false;
            double tGrid = dt_ * static_cast<double>(gridIdx_ + 1);
            double tNext = std::min(tGrid, horizon_);
            bool isGrid = tGrid <= horizon_;
            int trans = -1;
            if (transIdx_ < transitions_->size() &&
                (*transitions_)[transIdx_] <= tNext) {
                const double tt = (*transitions_)[transIdx_];
                if (tt < tNext) isGrid = false;
                tNext = tt;
                trans = static_cast<int>(transIdx_);
            }
            const double h = tNext - tCur_;
            const double sd = sigma_ * std::sqrt(std::max(h, 0.0));
            const double z = inverse_normal_cdf(normals_.uniform01());
            tEnd_.push_back(tNext);
            drift_.push_back(cDrift_ * h);
            shock_.push_back(sd * z);
            sigma2h_.push_back(sigma_ * sigma_ * h);
            transitionAfter_.push_back(trans);
            if (isGrid) ++gridIdx_;
            if (trans >= 0) ++transIdx_;
            tCur_ = tNext;
        }
        return true;
    }

    double tEnd(std::size_t i) const { return tEnd_[i]; }
    double drift(std::size_t i) const { return drift_[i]; }
    double shock(std::size_t i) const { return shock_[i]; }
    double sigma2h(std::size_t i) const { return sigma2h_[i]; }
    int transition_after(std::size_t i) const { return transitionAfter_[i]; }

private:
    double dt_, horizon_, cDrift_, sigma_;
    Xoshiro256pp normals_{0};
    const std::vector<double>* transitions_ = nullptr;
    std::vector<double> tEnd_, drift_, shock_, sigma2h_;
    std::vector<int> transitionAfter_;
    double tCur_ = 0.0;
    std::uint64_t gridIdx_ = 0;
    std::size_t transIdx_ = 0;
};

struct LegState {
    double logX;
    bool alive;
    double payoff;
};

// Walks one leg of one path for one stage-0 threshold level. logB[0] is the
// level under test; later stages are fixed.
struct LevelWalk {
    const StagePlan* plan;
    const std::vector<double>* logB;
    const std::vector<double>* payAtB;  // eta*b - theta per stage
    double eta, theta, rho;
    double x0, logX0;
    uint64_t bridgeKeyA, bridgeKeyB;
    bool antithetic;

    // Runs both legs through the schedule; returns the unit payoff (average
    // of the legs when antithetic).
    double run(PathSchedule& sched) const {
        LegState legs[2];
        legs[0] = {logX0, true, 0.0};
        legs[1] = {logX0, antithetic, 0.0};
        int stage = 0;

        auto exercise_at_threshold = [&](LegState& leg, int st, double t) {
            leg.payoff = (*plan).factors[st] * std::exp(-rho * t) * (*payAtB)[st];
            leg.alive = false;
        };
        // Entry check at t = 0 (and on stage switches): exercise at the
        // current shock level when it already sits above the stage threshold.
        auto entry_check = [&](LegState& leg, int st, double t) {
            if (leg.alive && leg.logX >= (*logB)[st]) {
                const double payoff = eta * std::exp(leg.logX) - theta;
                leg.payoff = (*plan).factors[st] *
                             (t > 0.0 ? std::exp(-rho * t) : 1.0) * payoff;
                leg.alive = false;
            }
        };
        entry_check(legs[0], 0, 0.0);
        entry_check(legs[1], 0, 0.0);

        for (std::size_t i = 0; legs[0].alive || legs[1].alive; ++i) {
            if (!sched.ensure(i)) break;
            const double dr = sched.drift(i);
            const double sh = sched.shock(i);
            const double s2h = sched.sigma2h(i);
            const double b = (*logB)[stage];
            for (int leg = 0; leg < 2; ++leg) {
                LegState& st = legs[leg];
                if (!st.alive) continue;
                const double l1 = st.logX + dr + (leg == 0 ? sh : -sh);
                if (l1 >= b) {
                    exercise_at_threshold(st, stage, sched.tEnd(i));
                    continue;
                }
                const double u0 = b - st.logX;
                const double u1 = b - l1;
                if (u0 * u1 < kBridgeCut * s2h && s2h > 0.0) {
                    const double pCross = std::exp(-2.0 * u0 * u1 / s2h);
                    const double u = counter_uniform01(
                        leg == 0 ? bridgeKeyA : bridgeKeyB, i);
                    if (u < pCross) {
                        exercise_at_threshold(st, stage, sched.tEnd(i));
                        continue;
                    }
                }
                st.logX = l1;
            }
            if (sched.transition_after(i) >= 0) {
                stage = sched.transition_after(i) + 1;
                entry_check(legs[0], stage, sched.tEnd(i));
                entry_check(legs[1], stage, sched.tEnd(i));
            }
        }
        if (antithetic) return 0.5 * (legs[0].payoff + legs[1].payoff);
        return legs[0].payoff;
    }
};

// Batch-means target: enough batches for a stable variance estimate of
// common-random-number differences, scaled down for small runs.
inline std::int64_t batch_units(std::int64_t units) {
    return std::max<std::int64_t>(1, (units + 47) / 48);
}

GridSearchResult run_engine(const ModelParams& p, const DiscountSpec& d,
                            AgentType agent,
                            std::span<const double> futureThresholds, double x0,
                            const SimConfig& cfg,
                            std::span<const double> levels) {
    validate(p);
    validate(d, true);
    validate_sim(cfg);
    if (!(x0 > 0.0)) throw std::invalid_argument("x0 > 0 violated");
    if (levels.empty()) throw std::invalid_argument("empty threshold grid");
    for (std::size_t i = 1; i < levels.size(); ++i) {
        if (!(levels[i] > levels[i - 1])) {
            throw std::invalid_argument("threshold grid must be strictly increasing");
        }
    }

    // Stage plan built from a representative stage-0 threshold.
    std::vector<double> ths;
    ths.push_back(levels.front());
    ths.insert(ths.end(), futureThresholds.begin(), futureThresholds.end());
    const StagePlan plan = detail::build_stage_plan(d, agent, ths);
    const auto [eta, theta] = derive_eta_theta(p);

    const std::size_t numLevels = levels.size();
    const std::size_t numStages = plan.thresholds.size();
    std::vector<std::vector<double>> logB(numLevels),
        payAtB(numLevels);  // per level, per stage
    for (std::size_t l = 0; l < numLevels; ++l) {
        logB[l].resize(numStages);
        payAtB[l].resize(numStages);
        logB[l][0] = std::log(levels[l]);
        payAtB[l][0] = eta * levels[l] - theta;
        for (std::size_t s = 1; s < numStages; ++s) {
            logB[l][s] = std::log(plan.thresholds[s]);
            payAtB[l][s] = eta * plan.thresholds[s] - theta;
        }
    }

    const std::int64_t units =
        cfg.antithetic ? cfg.numPaths / 2 : cfg.numPaths;
    const std::int64_t unitsPerBatch = batch_units(units);
    const std::int64_t numBatches = (units + unitsPerBatch - 1) / unitsPerBatch;

    std::vector<double> sum(numLevels, 0.0), sumSq(numLevels, 0.0);
    GridSearchResult result;
    result.batchMeans.assign(numLevels, {});

    PathSchedule sched(cfg.timeStep, cfg.horizon, p.alpha - 0.5 * p.sigma * p.sigma,
                       p.sigma);
    std::vector<double> transitions(plan.intensities.size());

    for (std::int64_t batch = 0; batch < numBatches; ++batch) {
        const std::int64_t lo = batch * unitsPerBatch;
        const std::int64_t hi = std::min(units, lo + unitsPerBatch);
        std::vector<double> bSum(numLevels, 0.0);
        for (std::int64_t u = lo; u < hi; ++u) {
            Xoshiro256pp normals(stream_seed(cfg.seed, u, 0));
            Xoshiro256pp trans(stream_seed(cfg.seed, u, 1));
            double t = 0.0;
            for (std::size_t k = 0; k < transitions.size(); ++k) {
                t += -std::log(1.0 - trans.uniform01()) / plan.intensities[k];
                transitions[k] = t;
            }
            sched.reset(normals, transitions);

            LevelWalk walk;
            walk.plan = &plan;
            walk.eta = eta;
            walk.theta = theta;
            walk.rho = p.rho;
            walk.x0 = x0;
            walk.logX0 = std::log(x0);
            walk.bridgeKeyA = stream_seed(cfg.seed, u, 2);
            walk.bridgeKeyB = stream_seed(cfg.seed, u, 3);
            walk.antithetic = cfg.antithetic;

            for (std::size_t l = 0; l < numLevels; ++l) {
                walk.logB = &logB[l];
                walk.payAtB = &payAtB[l];
                const double v = walk.run(sched);
                bSum[l] += v;
                sumSq[l] += v * v;
            }
        }
        for (std::size_t l = 0; l < numLevels; ++l) {
            sum[l] += bSum[l];
            result.batchMeans[l].push_back(bSum[l] /
                                           static_cast<double>(hi - lo));
        }
    }

    result.values.resize(numLevels);
    double bestMean = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < numLevels; ++l) {
        const double n = static_cast<double>(units);
        const double mean = sum[l] / n;
        double var = 0.0;
        if (units > 1) {
            var = std::max(0.0, (sumSq[l] - n * mean * mean) / (n - 1.0));
        }
        result.values[l] = {levels[l], mean, std::sqrt(var / n)};
        if (mean > bestMean) {
            bestMean = mean;
            result.bestIndex = l;
        }
    }
    result.bestThreshold = levels[result.bestIndex];
    return result;
}

}  // namespace

double GridSearchResult::diff_std_error(std::size_t i, std::size_t j) const {
    const auto& a = batchMeans.at(i);
    const auto& b = batchMeans.at(j);
    // Last batch may be short; use the full batches only.
    const std::size_t nb = a.size() > 1 ? a.size() - 1 : a.size();
    if (nb < 2) return std::numeric_limits<double>::infinity();
    double mean = 0.0;
    for (std::size_t k = 0; k < nb; ++k) mean += a[k] - b[k];
    mean /= static_cast<double>(nb);
    double var = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
        const double dk = a[k] - b[k] - mean;
        var += dk * dk;
    }
    var /= static_cast<double>(nb - 1);
    return std::sqrt(var / static_cast<double>(nb));
}

McEstimate simulate_policy_value(const ModelParams& p, const DiscountSpec& d,
                                 AgentType agent,
                                 std::span<const double> thresholds, double x0,
                                 const SimConfig& cfg) {
    if (thresholds.empty()) {
        throw std::invalid_argument("thresholds must be non-empty");
    }
    const std::vector<double> level{thresholds.front()};
    const std::span<const double> futures = thresholds.subspan(1);
    const auto grid = run_engine(p, d, agent, futures, x0, cfg, level);
    return {grid.values[0].mean, grid.values[0].stdError, cfg.numPaths};
}

GridSearchResult grid_optimal_threshold(const ModelParams& p,
                                        const DiscountSpec& d, AgentType agent,
                                        std::span<const double> futureThresholds,
                                        double x0, const SimConfig& cfg,
                                        std::span<const double> grid) {
    return run_engine(p, d, agent, futureThresholds, x0, cfg, grid);
}

NashGridResult nash_product_check(const ModelParams& p, double x,
                                  std::span<const double> priceGrid) {
    if (priceGrid.size() < 3) {
        throw std::invalid_argument("price grid needs at least 3 points");
    }
    std::size_t best = 0;
    double bestVal = -1.0;
    for (std::size_t i = 0; i < priceGrid.size(); ++i) {
        const double v = nash_product(p, x, priceGrid[i]);
        if (v > bestVal) {
            bestVal = v;
            best = i;
        }
    }
    if (best == 0 || best + 1 == priceGrid.size()) {
        std::ostringstream os;
        os << "price grid [" << priceGrid.front() << ", " << priceGrid.back()
           << "] does not bracket the Nash optimum (argmax at boundary)";
        throw std::runtime_error(os.str());
    }
    return {priceGrid[best], best};
}

}  // namespace exitopt
