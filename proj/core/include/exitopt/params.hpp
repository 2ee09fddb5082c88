#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace exitopt {

// Economic primitives of the trade-sale exit model. The stochastic profit
// shock X_t follows a GBM with drift `alpha` and volatility `sigma`;
// deterministic profit components qM/qA/qT scale the merged, acquiring and
// target firm profits; the VC holds fraction `phi` of the target, bargains
// with power `betaVC`, receives priority income `d` and pays exit cost `cost`.
struct ModelParams {
    double alpha = 0.02;
    double sigma = 0.2;
    double rho = 0.06;
    double qM = 1.7;
    double qA = 1.0;
    double qT = 0.5;
    double betaVC = 0.2;
    double phi = 0.4;
    double d = 0.4;
    double cost = 10.0;
};

// Quasi-hyperbolic discount structure. A venture capitalist is a chain of
// selves: selves 0..E-2 die at rate lambdaF (flow inconsistency, payoff
// reduction deltaF applies after the current self's death), self E-1 dies at
// rate lambdaPN / lambdaPS (fund expiry as perceived by a naive /
// sophisticated agent), and payoffs realised after expiry carry the sharper
// reduction deltaP. lambdaE models expiry as a single jump for the agent who
// ignores flow inconsistency. numSelves = E + 1.
struct DiscountSpec {
    double deltaF = 0.7;
    double deltaP = 0.5;
    double lambdaF = 1.0;
    double lambdaPN = 1.0;
    double lambdaPS = 1.0;
    double lambdaE = 1.0;
    int numSelves = 4;
};

// Composite payoff coefficients: the net exit payoff is eta*x - theta.
struct PayoffCoeffs {
    double eta;
    double theta;
};

// Positive roots of the characteristic quadratic
//   0.5*sigma^2*b*(b-1) + alpha*b - (rho + lambda) = 0
// for the intensities 0, lambdaE, lambdaPN, lambdaF, lambdaPS.
struct BetaExponents {
    double beta1;
    double beta2;
    double beta3;
    double beta4;
    double beta5;
};

// Throws std::invalid_argument naming the violated inequality.
void validate(const ModelParams& p);
void validate(const DiscountSpec& d, bool allowDeltaInversion = false);

PayoffCoeffs derive_eta_theta(const ModelParams& p);

// Positive root of the characteristic quadratic for intensity lambda >= 0.
// Always > 1 for valid parameters.
double beta_root(const ModelParams& p, double lambda);

BetaExponents beta_exponents(const ModelParams& p, const DiscountSpec& d);

// Value of the characteristic quadratic at b; zero at beta_root(p, lambda).
double characteristic(const ModelParams& p, double lambda, double b);

}  // namespace exitopt
