#pragma once

#include <span>
#include <vector>

namespace mdplab {

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);      // ddof = 1
double population_stddev(std::span<const double> xs);    // ddof = 0

/// Regularized incomplete beta function I_x(a, b), evaluated with the
/// continued-fraction expansion (modified Lentz). Accurate to ~1e-10.
double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided tail probability of the t distribution with df degrees of
/// freedom: P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_sided_p(double t, double df);

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;  // two-sided
};

/// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
/// freedom. Throws DegenerateSamples when a sample has fewer than two
/// elements or both variances are zero.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct SpearmanResult {
    double rho = 0.0;
    double p = 1.0;  // two-sided, via the t approximation with n-2 df
};

/// Spearman rank correlation with average ranks for ties. Throws
/// LengthMismatch on unequal lengths (or n < 3) and DegenerateRanks when
/// either input is constant.
SpearmanResult spearman(std::span<const double> xs, std::span<const double> ys);

/// Average ranks (1-based) with ties sharing the mean rank.
std::vector<double> average_ranks(std::span<const double> xs);

}  // namespace mdplab
