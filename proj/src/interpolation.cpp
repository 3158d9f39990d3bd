#include "extremalflow/interpolation.hpp"

#include "extremalflow/errors.hpp"

namespace extremalflow {

namespace {

double end_slope(double x0, double x1, double x2, double y0, double y1, double y2) {
  const double h1 = x1 - x0;
  const double h2 = x2 - x1;
  const double d1 = (y1 - y0) / h1;
  const double d2 = (y2 - y1) / h2;
  double s = ((2.0 * h1 + h2) * d1 - h1 * d2) / (h1 + h2);
  // Keep the endpoint slope shape-preserving.
  if (s * d1 <= 0.0) {
    s = 0.0;
  } else if (d1 * d2 < 0.0 && std::abs(s) > 3.0 * std::abs(d1)) {
    s = 3.0 * d1;
  }
  return s;
}

} // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : lo_(x.empty() ? 0.0 : x.front()), hi_(x.empty() ? 0.0 : x.back()), impl_(build(x, y)) {}

boost::math::interpolators::pchip<std::vector<double>> MonotoneCubic::build(std::vector<double>& x,
                                                                            std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 4 || y.size() != n) {
    throw InvalidArgument("monotone cubic interpolation needs at least four matching samples");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x[i] > x[i - 1])) {
      throw ChartError("interpolation abscissae are not strictly increasing");
    }
  }
  const double left = end_slope(x[0], x[1], x[2], y[0], y[1], y[2]);
  const double right = -end_slope(-x[n - 1], -x[n - 2], -x[n - 3], y[n - 1], y[n - 2], y[n - 3]);
  return {std::move(x), std::move(y), left, right};
}

} // namespace extremalflow
