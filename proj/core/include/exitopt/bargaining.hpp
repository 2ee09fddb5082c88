#pragma once

#include "exitopt/params.hpp"

namespace exitopt {

// Stand-alone firm values at shock level x (perpetuity values of the
// deterministic profit components).
struct FirmValues {
    double vA;    // acquiring firm
    double vM;    // merged firm
    double vTvc;  // VC's share of the target
};

// Outcome of the Nash bargain at shock level x.
struct DealOutcome {
    double price;         // negotiated merger price
    double vcPayoff;      // gross exit earning of the VC
    double synergyShare;  // phi * betaVC * (vM - vA - vT)
    double priorityGain;  // betaVC * (1 - phi) * d
};

FirmValues firm_values(const ModelParams& p, double x);

// Nash-bargaining merger price splitting the synergy surplus by betaVC.
double nash_price(const ModelParams& p, double x);

// Gross exit earning of the VC at the negotiated price (before exit cost).
double vc_exit_payoff(const ModelParams& p, double x);

// Net exit payoff eta*x - theta, i.e. vc_exit_payoff minus the exit cost.
double vc_exit_payoff_net(const ModelParams& p, double x);

DealOutcome deal_outcome(const ModelParams& p, double x);

// The Nash product whose maximiser over the price is nash_price. Zero when
// either side's surplus is negative.
double nash_product(const ModelParams& p, double x, double price);

}  // namespace exitopt
