#include "sftta/stats.hpp"

#include <algorithm>
#include <cmath>

#include "sftta/error.hpp"

namespace sftta {

WilsonInterval wilson_interval(double p_hat, std::size_t n, double z) {
    if (n == 0) throw Error("wilson_interval: n must be >= 1");
    if (p_hat < 0.0 || p_hat > 1.0) throw Error("wilson_interval: p_hat out of [0,1]");
    WilsonInterval w;
    w.p_hat = p_hat;
    w.n = n;
    w.z = z;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = p_hat + z2 / (2.0 * n);
    const double margin = z * std::sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n));
    w.low = std::max(0.0, (center - margin) / denom);
    w.high = std::min(1.0, (center + margin) / denom);
    return w;
}

namespace {

double log_binom_pmf(std::size_t k, std::size_t n, double p) {
    const double lc = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    double lp = 0.0;
    if (k > 0) lp += k * std::log(p);
    if (n - k > 0) lp += (n - k) * std::log1p(-p);
    return lc + lp;
}

// P(X >= x) for X ~ Binomial(n, p), summed in log space.
double binom_upper_tail(std::size_t x, std::size_t n, double p) {
    if (x == 0) return 1.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    if (n <= 49) {
        // direct summation with exact integer coefficients (C(49,24)
        // still fits a double), so fixtures like 56/1024 come out exact
        double sum = 0.0;
        for (std::size_t k = x; k <= n; ++k) {
            std::uint64_t c = 1;
            for (std::size_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
            sum += static_cast<double>(c) * std::pow(p, static_cast<double>(k)) *
                   std::pow(1.0 - p, static_cast<double>(n - k));
        }
        return std::min(1.0, sum);
    }
    double max_log = -INFINITY;
    for (std::size_t k = x; k <= n; ++k) max_log = std::max(max_log, log_binom_pmf(k, n, p));
    double sum = 0.0;
    for (std::size_t k = x; k <= n; ++k) sum += std::exp(log_binom_pmf(k, n, p) - max_log);
    return std::min(1.0, std::exp(max_log) * sum);
}

}  // namespace

double binomial_test_one_sided(std::size_t x, std::size_t n, double p0) {
    if (n == 0) throw Error("binomial_test_one_sided: n must be >= 1");
    if (x > n) throw Error("binomial_test_one_sided: x > n");
    return binom_upper_tail(x, n, p0);
}

HolmResult holm_bonferroni(const std::vector<std::pair<std::string, double>>& p_values,
                           double alpha) {
    HolmResult result;
    result.inputs = p_values;
    result.alpha = alpha;
    for (const auto& [label, p] : p_values)
        if (p < 0.0 || p > 1.0) throw Error("holm_bonferroni: p-value out of [0,1]: " + label);

    auto sorted = p_values;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
    const std::size_t m = sorted.size();
    for (std::size_t i = 0; i < m; ++i) {
        if (sorted[i].second <= alpha / static_cast<double>(m - i)) {
            result.rejected.push_back(sorted[i].first);
        } else {
            break;
        }
    }
    return result;
}

double min_detectable_rate(std::size_t n, double alpha, double power, double p0) {
    if (n == 0) throw Error("min_detectable_rate: n must be >= 1");
    // exact critical value at the Wilson-consistent level alpha/2
    const double level = alpha / 2.0;
    std::size_t x_crit = n + 1;
    for (std::size_t x = 0; x <= n; ++x) {
        if (binom_upper_tail(x, n, p0) <= level) {
            x_crit = x;
            break;
        }
    }
    if (x_crit > n) return 1.0;  // no attainable rejection region

    double lo = p0, hi = 1.0;
    for (int iter = 0; iter < 80; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (binom_upper_tail(x_crit, n, mid) >= power)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

PowerAnalysis power_analysis(std::size_t n, double alpha, double power, double p0) {
    PowerAnalysis pa;
    pa.alpha = alpha;
    pa.power = power;
    pa.n = n;
    pa.min_detectable_rate = min_detectable_rate(n, alpha, power, p0);
    return pa;
}

WinRateResult win_rate_from_counts(std::size_t n_win, std::size_t n_total, double z, double p0) {
    if (n_total == 0) throw Error("win_rate_from_counts: no comparisons");
    if (n_win > n_total) throw Error("win_rate_from_counts: n_win > n_total");
    WinRateResult r;
    r.n_win = n_win;
    r.n_total = n_total;
    r.w = static_cast<double>(n_win) / n_total;
    const auto wi = wilson_interval(r.w, n_total, z);
    r.wilson_low = wi.low;
    r.wilson_high = wi.high;
    r.p_value = binomial_test_one_sided(n_win, n_total, p0);
    return r;
}

}  // namespace sftta
