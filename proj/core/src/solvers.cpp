#include "exitopt/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace exitopt {

const char* to_string(AgentType a) {
    switch (a) {
        case AgentType::Consistent: return "consistent";
        case AgentType::CriticalOnly: return "critical-only";
        case AgentType::Naive: return "naive";
        case AgentType::Sophisticated: return "sophisticated";
    }
    return "?";
}

const char* to_string(LambdaBranch b) {
    switch (b) {
        case LambdaBranch::None: return "none";
        case LambdaBranch::Distinct: return "distinct";
        case LambdaBranch::Equal: return "equal";
    }
    return "?";
}

RootNotBracketed::RootNotBracketed(int selfIdx, double lo_, double hi_,
                                   double glo, double ghi)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "threshold equation for self " << selfIdx
             << " has no root in bracket [" << lo_ << ", " << hi_ << "]: g(lo)="
             << glo << ", g(hi)=" << ghi;
          return os.str();
      }()),
      selfIndex(selfIdx),
      lo(lo_),
      hi(hi_),
      gLo(glo),
      gHi(ghi) {}

CoefficientBlowup::CoefficientBlowup(int selfIdx, double magnitude)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "series coefficient overflow at self " << selfIdx
             << " (|coef|=" << magnitude
             << "); self count too large for this parameterization";
          return os.str();
      }()),
      selfIndex(selfIdx) {}

std::vector<double> ThresholdSolution::thresholds() const {
    std::vector<double> out;
    out.reserve(selves.size());
    for (const auto& s : selves) out.push_back(s.threshold);
    return out;
}

const SelfSolution& ThresholdSolution::self_by_index(int selfIndex) const {
    for (const auto& s : selves) {
        if (s.selfIndex == selfIndex) return s;
    }
    throw std::out_of_range("no such self index in solution");
}

double ThresholdSolution::value_matching_residual(const SelfSolution& s) const {
    return std::abs(s.value.value(s.threshold) - (eta * s.threshold - theta));
}

double ThresholdSolution::smooth_pasting_residual(const SelfSolution& s) const {
    return std::abs(s.value.derivative(s.threshold) - eta);
}

namespace detail {

namespace {

double intensity_for_exponent(const std::vector<ExponentIntensity>& map,
                              double exponent) {
    for (const auto& e : map) {
        if (e.exponent == exponent) return e.intensity;
    }
    throw std::logic_error("forcing exponent not registered with an intensity");
}

}  // namespace

PowerLogSeries particular_solution(const PowerLogSeries& forcing, double lam,
                                   const ModelParams& p,
                                   const std::vector<ExponentIntensity>& intensityOf,
                                   int selfIndex) {
    const double s2 = p.sigma * p.sigma;
    PowerLogSeries out;

    // Group forcing coefficients by exponent.
    std::map<double, std::vector<double>> groups;  // exponent -> coef by log power
    for (const auto& t : forcing.terms()) {
        auto& g = groups[t.exponent];
        if (static_cast<int>(g.size()) <= t.logPower) g.resize(t.logPower + 1, 0.0);
        g[t.logPower] += t.coef;
    }

    for (const auto& [b, f] : groups) {
        const int K = static_cast<int>(f.size()) - 1;
        const double lamB = intensity_for_exponent(intensityOf, b);
        const double qb = p.alpha + 0.5 * s2 * (2.0 * b - 1.0);
        if (lamB == lam) {
            // Resonant group: forcing at the operator's own root lifts each
            // log power by one. Solve the triangular system top-down.
            std::vector<double> a(K + 3, 0.0);  // a[i] multiplies x^b (log x)^i
            for (int k = K; k >= 0; --k) {
                a[k + 1] = (-lam * f[k] -
                            0.5 * s2 * (k + 2.0) * (k + 1.0) * a[k + 2]) /
                           (qb * (k + 1.0));
            }
            for (int i = 1; i <= K + 1; ++i) {
                if (std::abs(a[i]) > kCoefGuard) {
                    throw CoefficientBlowup(selfIndex, std::abs(a[i]));
                }
                out.add_term(a[i], b, i);
            }
        } else {
            // Non-resonant: same log powers, denominators exact in the
            // intensity gap lamB - lam.
            const double psi = lamB - lam;
            std::vector<double> g(K + 3, 0.0);
            for (int i = K; i >= 0; --i) {
                g[i] = (-lam * f[i] - qb * (i + 1.0) * g[i + 1] -
                        0.5 * s2 * (i + 2.0) * (i + 1.0) * g[i + 2]) /
                       psi;
            }
            for (int i = 0; i <= K; ++i) {
                if (std::abs(g[i]) > kCoefGuard) {
                    throw CoefficientBlowup(selfIndex, std::abs(g[i]));
                }
                out.add_term(g[i], b, i);
            }
        }
    }
    return out;
}

double threshold_condition(const PowerLogSeries& particular, double betaH,
                           double eta, double theta, double x) {
    const double lx = std::log(x);
    double s = eta * x * (betaH - 1.0) - betaH * theta;
    for (const auto& t : particular.terms()) {
        double lk = 1.0;
        for (int i = 0; i < t.logPower - 1; ++i) lk *= lx;
        const double lkm1 = lk;                              // L^{k-1}
        const double lkk = (t.logPower > 0) ? lk * lx : 1.0;  // L^k
        double term = (t.exponent - betaH) * lkk;
        if (t.logPower > 0) term += t.logPower * lkm1;
        s += t.coef * std::pow(x, t.exponent) * term;
    }
    return s;
}

ThresholdRoot solve_threshold(const PowerLogSeries& particular, double betaH,
                              double eta, double theta, double xStar,
                              int selfIndex) {
    const double lo = theta / eta * (1.0 + 1e-9);
    const double hi = xStar;
    auto g = [&](double x) {
        return threshold_condition(particular, betaH, eta, theta, x);
    };
    // Scale for the relative fixed-point residual |x - rhs(x)| / x.
    const double denom = eta * (betaH - 1.0);

    RootDiagnostics diag;
    diag.bracketLo = lo;
    diag.bracketHi = hi;

    const double gHi = g(hi);
    if (std::abs(gHi) <= 1e-11 * denom * hi) {
        // Root at the degenerate upper endpoint (no discount wedge).
        diag.residual = std::abs(gHi) / (denom * hi);
        return {hi, diag};
    }

    // The condition can have several roots when log terms are present; scan a
    // log-spaced grid for all sign changes.
    constexpr int kScan = 3000;
    const double ratio = hi / lo;
    double xPrev = lo;
    double gPrev = g(lo);
    struct Candidate {
        double x;
        int iters;
    };
    std::vector<Candidate> roots;
    for (int i = 1; i <= kScan; ++i) {
        const double x = lo * std::pow(ratio, static_cast<double>(i) / kScan);
        const double gx = g(x);
        if (gPrev == 0.0) {
            roots.push_back({xPrev, 0});
        } else if (gPrev * gx < 0.0) {
            // Bisection with a safeguarded secant step.
            double a = xPrev, b = x, ga = gPrev, gb = gx;
            double best = 0.5 * (a + b);
            int it = 0;
            for (; it < 200; ++it) {
                double m = 0.5 * (a + b);
                const double sec = (gb != ga) ? b - gb * (b - a) / (gb - ga) : m;
                if (sec > a + 0.01 * (b - a) && sec < b - 0.01 * (b - a)) {
                    m = sec;
                }
                const double gm = g(m);
                if (gm == 0.0) {
                    best = m;
                    break;
                }
                if (ga * gm < 0.0) {
                    b = m;
                    gb = gm;
                } else {
                    a = m;
                    ga = gm;
                }
                best = 0.5 * (a + b);
                if (b - a <= 8.0 * std::numeric_limits<double>::epsilon() * best) {
                    break;
                }
            }
            roots.push_back({best, it});
        }
        xPrev = x;
        gPrev = gx;
    }

    if (roots.empty()) {
        throw RootNotBracketed(selfIndex, lo, hi, g(lo), gHi);
    }

    // Value-dominant root: the admissible solution maximizing the
    // value-matching coefficient of the homogeneous term.
    auto homogeneous_coef = [&](double x) {
        return (eta * x - theta - particular.value(x)) * std::pow(x, -betaH);
    };
    const Candidate* best = &roots.front();
    double bestCoef = homogeneous_coef(best->x);
    for (const auto& r : roots) {
        const double c = homogeneous_coef(r.x);
        if (c > bestCoef) {
            bestCoef = c;
            best = &r;
        }
    }

    diag.iterations = best->iters;
    diag.candidateRoots = static_cast<int>(roots.size());
    diag.residual = std::abs(g(best->x)) / (denom * best->x);
    return {best->x, diag};
}

ThresholdSolution solve_chain(const ChainSpec& spec, AgentType agent,
                              LambdaBranch branch) {
    const ModelParams& p = spec.params;
    const auto [eta, theta] = derive_eta_theta(p);
    const double beta1 = beta_root(p, 0.0);
    const double xStar = beta1 * theta / ((beta1 - 1.0) * eta);
    const double fStar = eta * xStar - theta;

    ThresholdSolution sol;
    sol.agent = agent;
    sol.branch = branch;
    sol.eta = eta;
    sol.theta = theta;
    sol.xStar = xStar;

    const int numStages = static_cast<int>(spec.leaveIntensities.size()) + 1;
    if (static_cast<int>(spec.selfLabels.size()) != numStages) {
        throw std::logic_error("chain labels do not match intensity schedule");
    }

    std::vector<ExponentIntensity> intensityOf;
    intensityOf.push_back({beta1, 0.0});
    for (double lam : spec.leaveIntensities) {
        const double b = beta_root(p, lam);
        bool known = false;
        for (const auto& e : intensityOf) {
            known = known || e.exponent == b;
        }
        if (!known) intensityOf.push_back({b, lam});
    }

    // Terminal self: the time-consistent problem. Its regime is worth
    // deltaP * F to any earlier self (payoffs after expiry carry deltaP).
    SelfSolution terminal;
    terminal.selfIndex = spec.selfLabels.back();
    terminal.threshold = xStar;
    terminal.value.add_term(fStar * std::pow(xStar, -beta1), beta1, 0);
    if (numStages > 1) {
        terminal.continuation.add_series(terminal.value, spec.deltaP);
        terminal.hasContinuation = true;
    }

    std::vector<SelfSolution> stack;
    stack.push_back(std::move(terminal));

    for (int stage = numStages - 2; stage >= 0; --stage) {
        const double lam = spec.leaveIntensities[stage];
        const int label = spec.selfLabels[stage];
        const double betaH = beta_root(p, lam);
        const PowerLogSeries& forcing = stack.back().continuation;

        PowerLogSeries part =
            particular_solution(forcing, lam, p, intensityOf, label);
        auto root = solve_threshold(part, betaH, eta, theta, xStar, label);

        SelfSolution s;
        s.selfIndex = label;
        s.threshold = root.x;
        s.leaveIntensity = lam;
        s.root = root.diag;

        const double atThreshold = part.value(root.x);
        const double xPowNeg = std::pow(root.x, -betaH);
        const double aValue = (eta * root.x - theta - atThreshold) * xPowNeg;
        if (std::abs(aValue) > kCoefGuard) {
            throw CoefficientBlowup(label, std::abs(aValue));
        }
        s.value = part;
        s.value.add_term(aValue, betaH, 0);

        if (stage > 0) {
            // This regime's worth to the previous self: same ODE, matched to
            // the deltaF-reduced payoff at this self's threshold.
            const double aCont =
                (spec.deltaF * (eta * root.x - theta) - atThreshold) * xPowNeg;
            if (std::abs(aCont) > kCoefGuard) {
                throw CoefficientBlowup(label, std::abs(aCont));
            }
            s.continuation = part;
            s.continuation.add_term(aCont, betaH, 0);
            s.hasContinuation = true;
        }
        stack.push_back(std::move(s));
    }

    std::reverse(stack.begin(), stack.end());
    sol.selves = std::move(stack);
    return sol;
}

namespace {

// Snap the terminal intensity onto lambdaF inside the tie region, selecting
// the algebraic branch. epsilon = lambdaF / (lambdaF - lambdaP) blows up near
// the tie, so the log-term branch takes over there.
std::pair<double, LambdaBranch> snap_terminal_intensity(double lambdaF,
                                                        double lambdaP,
                                                        BranchPolicy policy) {
    const bool tied = std::abs(lambdaF - lambdaP) <= kTieTolerance * lambdaF;
    switch (policy) {
        case BranchPolicy::Auto:
            return tied ? std::pair{lambdaF, LambdaBranch::Equal}
                        : std::pair{lambdaP, LambdaBranch::Distinct};
        case BranchPolicy::ForceDistinct:
            if (tied) {
                throw BranchDegeneracy(
                    "distinct-lambda branch forced inside the tie tolerance: "
                    "epsilon = lambdaF/(lambdaF - lambdaP) is degenerate");
            }
            return {lambdaP, LambdaBranch::Distinct};
        case BranchPolicy::ForceEqual:
            return {lambdaF, LambdaBranch::Equal};
    }
    return {lambdaP, LambdaBranch::Distinct};
}

}  // namespace

}  // namespace detail

ThresholdSolution solve_consistent(const ModelParams& p) {
    validate(p);
    detail::ChainSpec spec;
    spec.params = p;
    spec.selfLabels = {0};
    return detail::solve_chain(spec, AgentType::Consistent, LambdaBranch::None);
}

ThresholdSolution solve_critical_only(const ModelParams& p,
                                      const DiscountSpec& d) {
    validate(p);
    validate(d, true);
    detail::ChainSpec spec;
    spec.params = p;
    spec.deltaF = 1.0;  // the two-stage agent has no flow wedge
    spec.deltaP = d.deltaP;
    spec.leaveIntensities = {d.lambdaE};
    spec.selfLabels = {0, d.numSelves - 1};
    return detail::solve_chain(spec, AgentType::CriticalOnly, LambdaBranch::None);
}

ThresholdSolution solve_naive(const ModelParams& p, const DiscountSpec& d,
                              BranchPolicy policy) {
    validate(p);
    validate(d, true);
    const int E = d.numSelves - 1;
    detail::ChainSpec spec;
    spec.params = p;
    spec.deltaF = d.deltaF;
    spec.deltaP = d.deltaP;
    LambdaBranch branch = LambdaBranch::None;
    if (E == 1) {
        // No flow selves between self 0 and expiry: a two-stage problem with
        // the naive terminal intensity.
        spec.leaveIntensities = {d.lambdaPN};
        spec.selfLabels = {0, 1};
    } else {
        auto [lamP, br] =
            detail::snap_terminal_intensity(d.lambdaF, d.lambdaPN, policy);
        branch = br;
        spec.leaveIntensities = {d.lambdaF, lamP};
        spec.selfLabels = {0, 1, E};
    }
    return detail::solve_chain(spec, AgentType::Naive, branch);
}

ThresholdSolution solve_sophisticated(const ModelParams& p,
                                      const DiscountSpec& d,
                                      BranchPolicy policy) {
    validate(p);
    validate(d, true);
    const int E = d.numSelves - 1;
    detail::ChainSpec spec;
    spec.params = p;
    spec.deltaF = d.deltaF;
    spec.deltaP = d.deltaP;
    LambdaBranch branch = LambdaBranch::None;
    if (E == 1) {
        spec.leaveIntensities = {d.lambdaPS};
        spec.selfLabels = {0, 1};
    } else {
        auto [lamP, br] =
            detail::snap_terminal_intensity(d.lambdaF, d.lambdaPS, policy);
        branch = br;
        spec.leaveIntensities.assign(E - 1, d.lambdaF);
        spec.leaveIntensities.push_back(lamP);
        spec.selfLabels.resize(E + 1);
        for (int i = 0; i <= E; ++i) spec.selfLabels[i] = i;
    }
    return detail::solve_chain(spec, AgentType::Sophisticated, branch);
}

}  // namespace exitopt
