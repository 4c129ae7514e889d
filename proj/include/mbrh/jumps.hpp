// Jump matrices of the basic and deformed Riemann-Hilbert problems, and the
// sectional factors that relate the deformed solution to the original one.
// Convention: M_- = M_+ J on every oriented piece.
// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <memory>

#include "mbrh/contour.hpp"
#include "mbrh/delta.hpp"
#include "mbrh/phase.hpp"
#include "mbrh/spectral.hpp"

namespace mbrh {

enum class JumpVariant { Original, Finite, Infinite, Custom };

// Open sectors between a lens piece and R (finite mode) or between an arc
// and R (infinite mode).
enum class Sector { Outside, D1, D3, D1bar, D3bar, D2, D2bar };

class JumpGenerator {
 public:
  using CustomFn = std::function<Mat2(PieceRole, const LocalPoint&)>;

  static JumpGenerator original(const ScatteringData& sd, const BroadeningTransform& tr, double t, double x);
  static JumpGenerator finite(const ScatteringData& sd, const BroadeningTransform& tr, double t, double x,
                              std::shared_ptr<const DeltaFunction> delta);
  static JumpGenerator infinite(const ScatteringData& sd, const BroadeningTransform& tr, double t, double x);
  static JumpGenerator custom(CustomFn fn);

  JumpVariant variant() const { return variant_; }
  double t() const { return t_; }
  double x() const { return x_; }
  const DeltaFunction* delta() const { return delta_.get(); }

  // Jump on a piece with the given role at a point of that piece.
  Mat2 jump(PieceRole role, const LocalPoint& z) const;
  Mat2 jump(PieceRole role, cplx z) const { return jump(role, at(z)); }

  // Sectional factor G with M_deformed = M_original * delta^sigma3 * G in the
  // sector (delta omitted for the infinite variant).
  Mat2 sector_factor(Sector s, cplx z) const;

  // Basic-problem jump on R with explicit boundary values of theta.
  Mat2 real_line(const LocalPoint& z) const;
  // Basic-problem jump on the open cut.
  Mat2 cut(const LocalPoint& z) const;

 private:
  JumpGenerator() = default;
  cplx theta(const LocalPoint& z, Side s = Side::None) const;

  JumpVariant variant_ = JumpVariant::Custom;
  std::shared_ptr<const ScatteringData> sd_;
  std::shared_ptr<const PhaseField> phase_;
  std::shared_ptr<const DeltaFunction> delta_;
  CustomFn custom_;
  double t_ = 0, x_ = 0;
};

}  // namespace mbrh
