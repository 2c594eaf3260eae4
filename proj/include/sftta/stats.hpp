#pragma once

#include <string>
#include <vector>

namespace sftta {

struct WilsonInterval {
    double p_hat = 0.0;
    std::size_t n = 0;
    double z = 1.96;
    double low = 0.0;
    double high = 1.0;
};

struct HolmResult {
    std::vector<std::pair<std::string, double>> inputs;
    std::vector<std::string> rejected;  // prefix of the ascending p order
    double alpha = 0.05;
};

struct PowerAnalysis {
    double alpha = 0.05;
    double power = 0.95;
    std::size_t n = 0;
    double min_detectable_rate = 0.0;
};

struct WinRateResult {
    std::size_t n_win = 0;
    std::size_t n_total = 0;
    double w = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 1.0;
    double p_value = 1.0;
    bool significant_after_holm = false;

    /// Strictly greater than 0.70 declares a reliable gain.
    bool meets_reliability_threshold(double threshold = 0.70) const { return w > threshold; }
};

/// Wilson score interval for a proportion.
WilsonInterval wilson_interval(double p_hat, std::size_t n, double z = 1.96);

/// Exact one-sided upper-tail p-value: P(X >= x) under Binomial(n, p0).
/// Stable in log space for large n.
double binomial_test_one_sided(std::size_t x, std::size_t n, double p0 = 0.5);

/// Step-down multiple-comparison correction: sort ascending, reject
/// while p_(i) <= alpha/(m-i+1), stop at the first failure.
HolmResult holm_bonferroni(const std::vector<std::pair<std::string, double>>& p_values,
                           double alpha = 0.05);

/// Smallest p1 whose exact rejection probability reaches `power`. The
/// critical value uses tail mass <= alpha/2, matching the two-sided
/// 95% Wilson-interval convention the threshold is paired with.
double min_detectable_rate(std::size_t n, double alpha = 0.05, double power = 0.95,
                           double p0 = 0.5);

PowerAnalysis power_analysis(std::size_t n, double alpha = 0.05, double power = 0.95,
                             double p0 = 0.5);

/// Assemble a WinRateResult from counted verdicts.
WinRateResult win_rate_from_counts(std::size_t n_win, std::size_t n_total, double z = 1.96,
                                   double p0 = 0.5);

}  // namespace sftta
