#pragma once

#include <vector>

#include "synth/core/error.hpp"

namespace synth::stats {

class InsufficientData : public Error {
  public:
    using Error::Error;
};

// Both samples have zero spread; the pooled t statistic is undefined.
class DegenerateTest : public Error {
  public:
    using Error::Error;
};

struct SummaryStats {
    int n = 0;
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation, n-1 denominator
    double min = 0.0;
    double max = 0.0;
    double median = 0.0;
};

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;  // two-sided
    double alpha = 0.05;
    bool significant = false;  // p < alpha
};

SummaryStats describe(const std::vector<double>& samples);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation
// (modified Lentz), relative error <= 1e-12 on the t-CDF path.
double regularized_incomplete_beta(double x, double a, double b);

// Student's t CDF via I_x(df/2, 1/2) with x = df / (df + t^2).
double t_cdf(double t, double df);

// Classic pooled-variance two-sample Student's t-test from summary
// statistics: sp^2 = ((n1-1)s1^2 + (n2-1)s2^2) / (n1+n2-2).
TTestResult t_test_summary(int n1, double mean1, double sd1, int n2, double mean2,
                           double sd2, double alpha = 0.05);

TTestResult t_test(const std::vector<double>& samples1,
                   const std::vector<double>& samples2, double alpha = 0.05);

}  // namespace synth::stats
