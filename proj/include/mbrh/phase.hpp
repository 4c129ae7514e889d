// Phase function theta(t,x,z) = z t - eta(z) x and its sign structure.
// SPDX-License-Identifier: MIT
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mbrh/broadening.hpp"

namespace mbrh {

class PhaseField {
 public:
  PhaseField(BroadeningTransform tr, double t, double x);

  double t() const { return t_; }
  double x() const { return x_; }
  double tau() const { return t_ - x_; }
  // x / (4 tau); +infinity when tau <= 0.
  double xi() const;

  cplx theta(const LocalPoint& p, Side side = Side::None) const;
  cplx theta(cplx z, Side side = Side::None) const { return theta(at(z), side); }
  double re_i_theta(cplx z) const;
  int signature(cplx z, double zero_band = 1e-12) const;
  const BroadeningTransform& transform() const { return tr_; }

 private:
  BroadeningTransform tr_;
  double t_, x_;
};

struct LevelLine {
  // Upper branch ordered by increasing Re; lower is its mirror image.
  std::vector<cplx> upper, lower;
  bool closed = true;  // oval (compact support) or two open branches
};

// lambda_extent bounds the sampled window for unbounded support.
LevelLine level_line(const BroadeningTransform& tr, double xi, int resolution, double lambda_extent = 20.0);

// Roots of xi * I1(lambda, 0) = 1 outside the support. Empty for unbounded
// support, or when I1 stays below 1/xi up to the support edge.
std::optional<std::pair<double, double>> stationary_points(const BroadeningTransform& tr, double xi);

}  // namespace mbrh
