#ifndef CELLDA_STATS_HPP
#define CELLDA_STATS_HPP

#include <vector>

namespace cellda {

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

// Chi-squared CDF with k degrees of freedom.
double chi2_cdf(double x, int k);

// Inverse chi-squared CDF. Newton on the regularized incomplete gamma,
// seeded by Wilson-Hilferty, with bisection fallback; tolerance 1e-10.
double chi2_quantile(double p, int k);

// Standard normal CDF and quantile.
double normal_cdf(double x);
double normal_quantile(double p);

// Median of a sample (NaN-free input expected); empty input is an error.
double median(std::vector<double> v);

// Robust scale: 1.4826 * median(|x - center|).
double mad_scale(const std::vector<double>& v, double center);

}  // namespace cellda

#endif
