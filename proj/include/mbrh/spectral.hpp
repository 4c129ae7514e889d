// Branch functions and spectral data of the periodic boundary signal.
// SPDX-License-Identifier: MIT
#pragma once

#include "mbrh/broadening.hpp"
#include "mbrh/common.hpp"

namespace mbrh {

// Segment: cut along [E, conj(E)], used for the jump data.
// ViaInfinity: cut from E upward and from conj(E) downward, smooth on R.
enum class Branch { Segment, ViaInfinity };

struct PlaneWaveData {
  cplx E;         // -omega0/2 + i A0/2
  double A0 = 0;  // boundary amplitude
  double omega0 = 0;
  double alpha0 = 0;  // -Re E
  double beta0 = 0;   // Re E + (1/4) int n/w ds, via-infinity branch
};

// beta0 is computed against the supplied transform.
PlaneWaveData endpoint_from_boundary(double A0, double omega0, const BroadeningTransform& tr);

struct BackgroundTriple {
  cplx E;
  cplx rho;
  double N;
};

class ScatteringData {
 public:
  explicit ScatteringData(PlaneWaveData pw);
  const PlaneWaveData& plane_wave() const { return pw_; }
  cplx E() const { return pw_.E; }
  double re_e() const { return pw_.E.real(); }
  double im_e() const { return pw_.E.imag(); }

  // On the open cut (E, conj E) a side is mandatory for the Segment branch;
  // Plus is the limit from the left of the downward-oriented segment, i.e.
  // from Re z > Re E.
  cplx w(const LocalPoint& p, Side side = Side::None, Branch br = Branch::Segment) const;
  cplx kappa(const LocalPoint& p, Side side = Side::None, Branch br = Branch::Segment) const;
  cplx a(const LocalPoint& p, Side side = Side::None) const;
  cplx b(const LocalPoint& p, Side side = Side::None) const;
  cplx r(const LocalPoint& p, Side side = Side::None) const;
  // Product a*b, evaluated as i Im E / (2 w).
  cplx ab(const LocalPoint& p, Side side = Side::None) const;
  // Only on the open segment (E, conj E).
  cplx h(const LocalPoint& p) const;
  // [[a, b], [b, a]]
  Mat2 transition(const LocalPoint& p, Side side = Side::None) const;

  cplx w(cplx z, Side side = Side::None, Branch br = Branch::Segment) const { return w(at(z), side, br); }
  cplx kappa(cplx z, Side side = Side::None, Branch br = Branch::Segment) const {
    return kappa(at(z), side, br);
  }
  cplx a(cplx z, Side side = Side::None) const { return a(at(z), side); }
  cplx b(cplx z, Side side = Side::None) const { return b(at(z), side); }
  cplx r(cplx z, Side side = Side::None) const { return r(at(z), side); }
  cplx h(cplx z) const { return h(at(z)); }

  BackgroundTriple background(double t, double x, double lambda) const;

  // True when p lies on the open vertical cut.
  bool on_cut(const LocalPoint& p) const;

 private:
  cplx shifted(const LocalPoint& p) const;  // z - Re E, exact near Re E
  PlaneWaveData pw_;
};

}  // namespace mbrh
