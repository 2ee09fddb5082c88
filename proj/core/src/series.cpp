#include "exitopt/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace exitopt {

namespace {

void require_positive(double x) {
    if (!(x > 0.0)) {
        throw std::domain_error("power-log series undefined for x <= 0");
    }
}

// (log x)^k with 0^0 = 1.
inline double logpow(double lx, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= lx;
    return r;
}

}  // namespace

void PowerLogSeries::add_term(double coef, double exponent, int logPower) {
    if (logPower < 0) {
        throw std::invalid_argument("logPower must be >= 0");
    }
    if (coef == 0.0) return;
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), std::pair{exponent, logPower},
        [](const PowerLogTerm& t, const std::pair<double, int>& key) {
            if (t.exponent != key.first) return t.exponent < key.first;
            return t.logPower < key.second;
        });
    if (it != terms_.end() && it->exponent == exponent && it->logPower == logPower) {
        it->coef += coef;
        if (it->coef == 0.0) terms_.erase(it);
        return;
    }
    terms_.insert(it, {coef, exponent, logPower});
}

void PowerLogSeries::add_series(const PowerLogSeries& other, double scale) {
    for (const auto& t : other.terms_) {
        add_term(scale * t.coef, t.exponent, t.logPower);
    }
}

double PowerLogSeries::value(double x) const {
    require_positive(x);
    const double lx = std::log(x);
    double s = 0.0;
    for (const auto& t : terms_) {
        s += t.coef * std::pow(x, t.exponent) * logpow(lx, t.logPower);
    }
    return s;
}

double PowerLogSeries::derivative(double x) const {
    require_positive(x);
    const double lx = std::log(x);
    double s = 0.0;
    for (const auto& t : terms_) {
        const double xb1 = std::pow(x, t.exponent - 1.0);
        double d = t.exponent * logpow(lx, t.logPower);
        if (t.logPower > 0) d += t.logPower * logpow(lx, t.logPower - 1);
        s += t.coef * xb1 * d;
    }
    return s;
}

double PowerLogSeries::second_derivative(double x) const {
    require_positive(x);
    const double lx = std::log(x);
    double s = 0.0;
    for (const auto& t : terms_) {
        const double b = t.exponent;
        const int k = t.logPower;
        const double xb2 = std::pow(x, b - 2.0);
        double d = b * (b - 1.0) * logpow(lx, k);
        if (k > 0) d += (2.0 * b - 1.0) * k * logpow(lx, k - 1);
        if (k > 1) d += static_cast<double>(k) * (k - 1) * logpow(lx, k - 2);
        s += t.coef * xb2 * d;
    }
    return s;
}

double PowerLogSeries::max_abs_coef() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, std::abs(t.coef));
    return m;
}

double eval_value(const PowerLogSeries& series, double x) {
    return series.value(x);
}

}  // namespace exitopt
