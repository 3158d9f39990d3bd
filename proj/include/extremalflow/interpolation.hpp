#pragma once

#include <vector>

// pchip.hpp calls isnan unqualified; math.h puts it in the global namespace.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>

namespace extremalflow {

/// Shape-preserving piecewise cubic Hermite interpolant (PCHIP) over strictly
/// increasing abscissae. Endpoint slopes use one-sided three-point stencils.
class MonotoneCubic {
public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const { return impl_(x); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

private:
  static boost::math::interpolators::pchip<std::vector<double>> build(std::vector<double>& x,
                                                                      std::vector<double>& y);
  double lo_;
  double hi_;
  boost::math::interpolators::pchip<std::vector<double>> impl_;
};

} // namespace extremalflow
