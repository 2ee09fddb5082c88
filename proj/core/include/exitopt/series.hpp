#pragma once

#include <vector>

namespace exitopt {

// One term coef * x^exponent * (log x)^logPower.
struct PowerLogTerm {
    double coef;
    double exponent;
    int logPower;
};

// Value-function representation as a sum of power-log terms. Such sums arise
// from the exit option ODEs: repeated forcing at the resonant exponent lifts
// the log power by one per recursion level. Terms with identical
// (exponent, logPower) are merged; exponents are compared bitwise since they
// are computed once per solve.
class PowerLogSeries {
public:
    PowerLogSeries() = default;

    void add_term(double coef, double exponent, int logPower);
    void add_series(const PowerLogSeries& other, double scale = 1.0);

    // Throws std::domain_error for x <= 0.
    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    const std::vector<PowerLogTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    double max_abs_coef() const;

private:
    std::vector<PowerLogTerm> terms_;  // sorted by (exponent, logPower)
};

// Free-function form of series.value(x).
double eval_value(const PowerLogSeries& series, double x);

}  // namespace exitopt
