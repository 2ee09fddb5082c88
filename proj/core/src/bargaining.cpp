#include "exitopt/bargaining.hpp"

#include <cmath>
#include <stdexcept>

namespace exitopt {

namespace {

void require_positive_shock(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("shock level x must be > 0");
    }
}

}  // namespace

FirmValues firm_values(const ModelParams& p, double x) {
    validate(p);
    require_positive_shock(x);
    const double perp = x / (p.rho - p.alpha);
    return {p.qA * perp, p.qM * perp, p.phi * p.qT * perp};
}

double nash_price(const ModelParams& p, double x) {
    validate(p);
    require_positive_shock(x);
    const double perp = x / (p.rho - p.alpha);
    return p.qT * perp - (1.0 - p.betaVC) * (1.0 - p.phi) / p.phi * p.d +
           p.betaVC * (p.qM - p.qA - p.qT) * perp;
}

double vc_exit_payoff(const ModelParams& p, double x) {
    validate(p);
    require_positive_shock(x);
    const double perp = x / (p.rho - p.alpha);
    return p.phi * p.qT * perp + p.betaVC * (1.0 - p.phi) * p.d +
           p.phi * p.betaVC * (p.qM - p.qA - p.qT) * perp;
}

double vc_exit_payoff_net(const ModelParams& p, double x) {
    const auto [eta, theta] = derive_eta_theta(p);
    require_positive_shock(x);
    return eta * x - theta;
}

DealOutcome deal_outcome(const ModelParams& p, double x) {
    const auto fv = firm_values(p, x);
    const double price = nash_price(p, x);
    const double synergyShare = p.phi * p.betaVC * (fv.vM - fv.vA - fv.vTvc / p.phi);
    const double priorityGain = p.betaVC * (1.0 - p.phi) * p.d;
    return {price, vc_exit_payoff(p, x), synergyShare, priorityGain};
}

double nash_product(const ModelParams& p, double x, double price) {
    validate(p);
    require_positive_shock(x);
    const auto fv = firm_values(p, x);
    const double vcGain = p.d + p.phi * (price - p.d) - fv.vTvc;
    const double acqGain = fv.vM - price - fv.vA;
    if (vcGain < 0.0 || acqGain < 0.0) {
        return 0.0;
    }
    return std::pow(vcGain, p.betaVC) * std::pow(acqGain, 1.0 - p.betaVC);
}

}  // namespace exitopt
