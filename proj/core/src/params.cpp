#include "exitopt/params.hpp"

#include <cmath>
#include <sstream>

namespace exitopt {

namespace {

[[noreturn]] void reject(const std::string& what) {
    throw std::invalid_argument("invalid parameters: " + what);
}

}  // namespace

void validate(const ModelParams& p) {
    std::ostringstream os;
    if (!(p.sigma > 0.0)) {
        os << "sigma > 0 violated (sigma=" << p.sigma << ")";
        reject(os.str());
    }
    if (!(p.rho > 0.0)) {
        os << "rho > 0 violated (rho=" << p.rho << ")";
        reject(os.str());
    }
    if (!(p.rho > p.alpha)) {
        os << "rho > alpha violated (rho=" << p.rho << ", alpha=" << p.alpha
           << "); perpetuity values do not converge";
        reject(os.str());
    }
    if (!(p.phi > 0.0 && p.phi <= 1.0)) {
        os << "phi in (0,1] violated (phi=" << p.phi << ")";
        reject(os.str());
    }
    if (!(p.betaVC >= 0.0 && p.betaVC <= 1.0)) {
        os << "betaVC in [0,1] violated (betaVC=" << p.betaVC << ")";
        reject(os.str());
    }
    if (!(p.d >= 0.0)) {
        os << "d >= 0 violated (d=" << p.d << ")";
        reject(os.str());
    }
    if (!(p.cost >= 0.0)) {
        os << "cost >= 0 violated (cost=" << p.cost << ")";
        reject(os.str());
    }
    if (!(p.qM > p.qA + p.qT)) {
        os << "positive synergy qM > qA + qT violated (qM=" << p.qM
           << ", qA+qT=" << p.qA + p.qT << ")";
        reject(os.str());
    }
    const double theta = p.cost - p.betaVC * p.d * (1.0 - p.phi);
    if (!(theta > 0.0)) {
        os << "theta = cost - betaVC*d*(1-phi) > 0 violated (theta=" << theta
           << "); the stopping problem has no interior threshold";
        reject(os.str());
    }
}

void validate(const DiscountSpec& d, bool allowDeltaInversion) {
    std::ostringstream os;
    auto in01 = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!in01(d.deltaF)) {
        os << "deltaF in (0,1] violated (deltaF=" << d.deltaF << ")";
        reject(os.str());
    }
    if (!in01(d.deltaP)) {
        os << "deltaP in (0,1] violated (deltaP=" << d.deltaP << ")";
        reject(os.str());
    }
    if (!allowDeltaInversion && !(d.deltaF >= d.deltaP)) {
        os << "deltaF >= deltaP violated (deltaF=" << d.deltaF
           << ", deltaP=" << d.deltaP << ")";
        reject(os.str());
    }
    if (!(d.lambdaF > 0.0)) {
        os << "lambdaF > 0 violated (lambdaF=" << d.lambdaF << ")";
        reject(os.str());
    }
    if (!(d.lambdaPN > 0.0)) {
        os << "lambdaPN > 0 violated (lambdaPN=" << d.lambdaPN << ")";
        reject(os.str());
    }
    if (!(d.lambdaPS > 0.0)) {
        os << "lambdaPS > 0 violated (lambdaPS=" << d.lambdaPS << ")";
        reject(os.str());
    }
    if (!(d.lambdaE > 0.0)) {
        os << "lambdaE > 0 violated (lambdaE=" << d.lambdaE << ")";
        reject(os.str());
    }
    if (d.numSelves < 2) {
        os << "numSelves >= 2 violated (numSelves=" << d.numSelves << ")";
        reject(os.str());
    }
}

PayoffCoeffs derive_eta_theta(const ModelParams& p) {
    validate(p);
    const double eta =
        p.phi * (p.qT + p.betaVC * (p.qM - p.qA - p.qT)) / (p.rho - p.alpha);
    const double theta = p.cost - p.betaVC * p.d * (1.0 - p.phi);
    return {eta, theta};
}

double characteristic(const ModelParams& p, double lambda, double b) {
    return 0.5 * p.sigma * p.sigma * b * (b - 1.0) + p.alpha * b -
           (p.rho + lambda);
}

double beta_root(const ModelParams& p, double lambda) {
    validate(p);
    if (!(lambda >= 0.0)) {
        throw std::invalid_argument("invalid parameters: lambda >= 0 violated");
    }
    const double s2 = p.sigma * p.sigma;
    const double m = p.alpha / s2 - 0.5;
    const double c = 2.0 * (p.rho + lambda) / s2;
    // Stable form of the positive quadratic root: avoid cancellation when the
    // drift term dominates.
    double b;
    if (m > 0.0) {
        b = c / (m + std::sqrt(m * m + c));
    } else {
        b = -m + std::sqrt(m * m + c);
    }
    // One Newton polish on the characteristic quadratic.
    const double deriv = s2 * (b - 0.5) + p.alpha;
    b -= characteristic(p, lambda, b) / deriv;
    return b;
}

BetaExponents beta_exponents(const ModelParams& p, const DiscountSpec& d) {
    validate(d, true);
    return {beta_root(p, 0.0), beta_root(p, d.lambdaE), beta_root(p, d.lambdaPN),
            beta_root(p, d.lambdaF), beta_root(p, d.lambdaPS)};
}

}  // namespace exitopt
