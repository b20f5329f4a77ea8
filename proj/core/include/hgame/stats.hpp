#pragma once

#include <span>

namespace hgame::stats {

double mean(std::span<const double> v);
// Sample standard deviation (n - 1); 0 for fewer than two values.
double stddev(std::span<const double> v);
double standard_error(std::span<const double> v);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
// Ordinary least squares y ~ slope * x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);
// Fit of log(y) against log(x); all values must be positive.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

}  // namespace hgame::stats
