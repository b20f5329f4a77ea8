#include "hgame/stats.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "hgame/errors.hpp"

namespace hgame::stats {

double mean(std::span<const double> v) {
  if (v.empty()) throw ParameterError("mean: empty input");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double standard_error(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return stddev(v) / std::sqrt(static_cast<double>(v.size()));
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("fit_line: need two or more paired points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw ParameterError("fit_line: x values are all equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

LineFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx(x.size());
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw ParameterError("fit_loglog: x must be positive");
    lx[i] = std::log(x[i]);
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > 0.0)) throw ParameterError("fit_loglog: y must be positive");
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

}  // namespace hgame::stats
