#include "synth/stats/stats.hpp"

#include <algorithm>
#include <cmath>

namespace synth::stats {

SummaryStats describe(const std::vector<double>& samples) {
    const size_t n = samples.size();
    if (n < 2) throw InsufficientData("describe requires at least 2 observations");

    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= static_cast<double>(n);

    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    double sd = std::sqrt(ss / static_cast<double>(n - 1));

    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    double median = (n % 2 == 1) ? sorted[n / 2]
                                 : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    return SummaryStats{static_cast<int>(n), mean, sd, sorted.front(), sorted.back(),
                        median};
}

// Continued fraction for I_x(a, b), evaluated with the modified Lentz
// algorithm. Converges fast for x < (a+1)/(a+b+2); the caller uses the
// symmetry transform outside that region.
static double incomplete_beta_cf(double x, double a, double b) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-16;
    constexpr int kMaxIter = 300;

    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;

    for (int m = 1; m <= kMaxIter; ++m) {
        double m2 = 2.0 * m;
        // even step
        double aa = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        // odd step
        aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) return h;
    }
    throw DomainError("incomplete beta continued fraction failed to converge");
}

double regularized_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("incomplete beta requires a > 0 and b > 0");
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("incomplete beta requires x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    double log_prefix = a * std::log(x) + b * std::log1p(-x) -
                        (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(log_prefix) * incomplete_beta_cf(x, a, b) / a;
    return 1.0 - std::exp(log_prefix) * incomplete_beta_cf(1.0 - x, b, a) / b;
}

double t_cdf(double t, double df) {
    if (!(df > 0.0)) throw DomainError("t_cdf requires df > 0");
    if (t == 0.0) return 0.5;
    double x = df / (df + t * t);
    double tail = 0.5 * regularized_incomplete_beta(x, 0.5 * df, 0.5);
    return t > 0.0 ? 1.0 - tail : tail;
}

TTestResult t_test_summary(int n1, double mean1, double sd1, int n2, double mean2,
                           double sd2, double alpha) {
    if (n1 < 2 || n2 < 2)
        throw InsufficientData("t-test requires n >= 2 in both samples");
    if (sd1 < 0.0 || sd2 < 0.0) throw DomainError("standard deviations must be >= 0");
    if (sd1 == 0.0 && sd2 == 0.0)
        throw DegenerateTest("both samples have zero standard deviation");

    double df = static_cast<double>(n1 + n2 - 2);
    double pooled_var = ((n1 - 1) * sd1 * sd1 + (n2 - 1) * sd2 * sd2) / df;
    double se = std::sqrt(pooled_var * (1.0 / n1 + 1.0 / n2));
    double t = (mean1 - mean2) / se;
    double p = 2.0 * (1.0 - t_cdf(std::fabs(t), df));
    p = std::clamp(p, 0.0, 1.0);

    return TTestResult{t, df, p, alpha, p < alpha};
}

TTestResult t_test(const std::vector<double>& samples1,
                   const std::vector<double>& samples2, double alpha) {
    SummaryStats s1 = describe(samples1);
    SummaryStats s2 = describe(samples2);
    return t_test_summary(s1.n, s1.mean, s1.sd, s2.n, s2.mean, s2.sd, alpha);
}

}  // namespace synth::stats
