#pragma once

#include "exitopt/params.hpp"
#include "exitopt/series.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace exitopt {

enum class AgentType { Consistent, CriticalOnly, Naive, Sophisticated };

// Which algebraic branch the flow-self recursion took. The equal branch is
// taken when the terminal-self intensity ties the flow intensity (resonant
// forcing, log terms appear); the distinct branch otherwise.
enum class LambdaBranch { None, Distinct, Equal };

enum class BranchPolicy { Auto, ForceDistinct, ForceEqual };

const char* to_string(AgentType a);
const char* to_string(LambdaBranch b);

// Thrown when the threshold equation has no root in the admissible bracket.
struct RootNotBracketed : std::runtime_error {
    RootNotBracketed(int selfIndex, double lo, double hi, double glo, double ghi);
    int selfIndex;
    double lo, hi, gLo, gHi;
};

// Thrown when ForceDistinct is requested inside the equal-lambda tie region.
struct BranchDegeneracy : std::runtime_error {
    explicit BranchDegeneracy(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a series coefficient exceeds the overflow guard; signals that
// the self count is too large for the current parameterization.
struct CoefficientBlowup : std::runtime_error {
    CoefficientBlowup(int selfIndex, double magnitude);
    int selfIndex;
};

struct RootDiagnostics {
    int iterations = 0;
    double residual = 0.0;  // relative fixed-point residual |x - rhs(x)| / x
    double bracketLo = 0.0;
    double bracketHi = 0.0;
    int candidateRoots = 1;  // sign changes found in the bracket scan
};

// Per-self slice of a solution. `value` is the option value function on the
// continuation region (0, threshold]; beyond the threshold the value is the
// intrinsic payoff eta*x - theta. `continuation` is the previous self's
// valuation of this self's regime (absent for the first self of a chain).
struct SelfSolution {
    int selfIndex = 0;
    double threshold = 0.0;
    PowerLogSeries value;
    PowerLogSeries continuation;
    bool hasContinuation = false;
    double leaveIntensity = 0.0;  // rate of transitioning to the next regime
    RootDiagnostics root;
};

struct ThresholdSolution {
    AgentType agent = AgentType::Consistent;
    LambdaBranch branch = LambdaBranch::None;
    double eta = 0.0;
    double theta = 0.0;
    double xStar = 0.0;  // time-consistent reference threshold
    std::vector<SelfSolution> selves;  // ascending selfIndex, terminal last

    std::vector<double> thresholds() const;
    const SelfSolution& self_by_index(int selfIndex) const;

    // Residuals of the free-boundary conditions at each self's own threshold.
    double value_matching_residual(const SelfSolution& s) const;
    double smooth_pasting_residual(const SelfSolution& s) const;
};

// Time-consistent agent: closed-form threshold and value function.
ThresholdSolution solve_consistent(const ModelParams& p);

// Agent aware only of the expiry-date inconsistency: a two-stage problem with
// expiry arriving at rate lambdaE.
ThresholdSolution solve_critical_only(const ModelParams& p, const DiscountSpec& d);

// Naive agent: believes all flow selves share the current self's preferences,
// collapsing the chain to three stages (self 0, merged future self, terminal).
ThresholdSolution solve_naive(const ModelParams& p, const DiscountSpec& d,
                              BranchPolicy policy = BranchPolicy::Auto);

// Sophisticated agent: full backward recursion over numSelves selves, each
// anticipating that later selves optimize for themselves.
ThresholdSolution solve_sophisticated(const ModelParams& p, const DiscountSpec& d,
                                      BranchPolicy policy = BranchPolicy::Auto);

namespace detail {

// Relative tie tolerance for the equal-lambda branch decision.
inline constexpr double kTieTolerance = 1e-8;

// Overflow guard for series coefficients.
inline constexpr double kCoefGuard = 1e120;

// Intensity schedule of a self chain: leaveIntensity[n] is the rate at which
// self n hands over to regime n+1; the terminal regime has none. The solvers
// differ only in this schedule.
struct ChainSpec {
    ModelParams params;
    double deltaF = 1.0;
    double deltaP = 1.0;
    std::vector<double> leaveIntensities;
    std::vector<int> selfLabels;  // size leaveIntensities.size() + 1
};

ThresholdSolution solve_chain(const ChainSpec& spec, AgentType agent,
                              LambdaBranch branch);

// Particular solution of the continuation-region ODE
//   0.5 sigma^2 x^2 v'' + alpha x v' - (rho + lam) v + lam * forcing = 0
// excluding the homogeneous term A x^beta(lam). `intensityOf` maps each
// forcing exponent to the intensity whose characteristic root it is, so the
// resonance test and the non-resonant denominators are exact in the
// intensities.
struct ExponentIntensity {
    double exponent;
    double intensity;
};
PowerLogSeries particular_solution(const PowerLogSeries& forcing, double lam,
                                   const ModelParams& p,
                                   const std::vector<ExponentIntensity>& intensityOf,
                                   int selfIndex);

// Free-boundary condition for a value function particular + A x^betaH:
// value matching and smooth pasting combine to g(x) = 0 with
//   g(x) = eta x (betaH - 1) - betaH theta
//        + sum over particular terms c x^b [ (b - betaH) L^k + k L^{k-1} ].
double threshold_condition(const PowerLogSeries& particular, double betaH,
                           double eta, double theta, double x);

struct ThresholdRoot {
    double x;
    RootDiagnostics diag;
};

// Scans (theta/eta, xStar] for sign changes of the threshold condition,
// refines each by safeguarded bisection/secant, and picks the root whose
// value-matching coefficient is largest (the value-dominant solution when the
// condition has several roots).
ThresholdRoot solve_threshold(const PowerLogSeries& particular, double betaH,
                              double eta, double theta, double xStar,
                              int selfIndex);

}  // namespace detail

}  // namespace exitopt
