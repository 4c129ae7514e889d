// Scalar factor delta(z) = exp((1/2 pi i) int_rays ln(1 - r^2) / (s - z) ds)
// on the rays (-inf, lambda1] and [lambda2, inf).
// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "mbrh/spectral.hpp"

namespace mbrh {

class DeltaFunction {
 public:
  DeltaFunction(const ScatteringData& sd, double lambda1, double lambda2, int nodes_per_ray = 200);

  double lambda1() const { return l1_; }
  double lambda2() const { return l2_; }

  // log delta. On the rays a side is mandatory (Plus: from above).
  cplx log_value(const LocalPoint& z, Side side = Side::None) const;
  cplx value(const LocalPoint& z, Side side = Side::None) const { return std::exp(log_value(z, side)); }
  cplx value(cplx z, Side side = Side::None) const { return value(at(z), side); }

  // ln(1 - r(s)^2) for real s off the cut point.
  double log_jump(double s) const;
  bool on_rays(const LocalPoint& z) const;

 private:
  struct Ray {
    double start = 0;  // ray [start, inf) in its own variable
    double scale = 1;
    std::vector<double> off, w, f;  // s_j - start, weights, f(s_j)
  };
  // int_{start}^{inf} g(s)/(s - z) ds with g(s_j) = f_j, z = start + d.
  cplx ray_integral(const Ray& r, bool mirrored, cplx d, Side side) const;

  ScatteringData sd_;
  double l1_, l2_;
  Ray right_, left_;  // left_ stores the mirror t = -s on [-lambda1, inf)
};

}  // namespace mbrh
