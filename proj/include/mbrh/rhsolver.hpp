// Nystrom discretization of the Cauchy boundary operator, the dense solve for
// the boundary values of M, and evaluation of M off and on the contour.
// SPDX-License-Identifier: MIT
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mbrh/contour.hpp"
#include "mbrh/jumps.hpp"

namespace mbrh {

struct SolverOptions {
  DiscretizeOptions disc;
  double cond_limit = 1e12;
};

struct SolveDiagnostics {
  int nodes = 0;
  double cond_estimate = 0;    // 1-norm, from the LU factors
  double linear_residual = 0;  // relative
  double seconds = 0;
};

// A point on the discretized contour: panel index and base parameter
// u = p - 1 = 1 - q.
struct ContourPoint {
  int panel = -1;
  double p = 1, q = 1;
};

// The unknown is U = M_+ - I at the nodes. The collocated equation is
//   U - C_+[U (I - J)] = C_+[I - J].
class RHInstance {
 public:
  RHInstance(Contour c, JumpGenerator g, const SolverOptions& opt);

  void solve();
  bool solved() const { return solved_; }

  const Contour& contour() const { return contour_; }
  const Discretization& discretization() const { return disc_; }
  const JumpGenerator& generator() const { return gen_; }
  const std::vector<Mat2>& jumps() const { return jumps_; }
  // M_+ - I at the nodes.
  const std::vector<Mat2>& W() const { return W_; }
  const SolveDiagnostics& diagnostics() const { return diag_; }

  // M of this (possibly deformed) problem at a point off the contour.
  Mat2 M(const LocalPoint& z) const;
  Mat2 M(cplx z) const { return M(at(z)); }
  // Boundary value from the given side at a point of a panel.
  Mat2 boundary(const ContourPoint& cp, Side side) const;
  // Coefficient m in M = I + m/z + O(1/z^2), from the contour integral.
  Mat2 moment() const;

  LocalPoint point(const ContourPoint& cp) const;
  // Jump at an arbitrary point of a panel.
  Mat2 jump_at(const ContourPoint& cp) const;
  // Contour point on the panel at Gauss parameter tau (not a node in general).
  ContourPoint at_tau(int panel, double tau) const;
  // Panel containing the real point lambda on a piece of the given role.
  std::optional<ContourPoint> locate_real(PieceRole role, double lambda) const;

  // Discrete Cauchy operator rows: coefficients c_j with
  //   (1/2 pi i) int f(s)/(s - z) ds ~ sum_j c_j f(s_j),
  // a principal value when the target lies on its own panel (own >= 0); in
  // that case interp receives the interpolation weights of f at the target.
  void cauchy_row(const LocalPoint& z, int own, double pv, double qv, int own_node, std::vector<cplx>& row,
                  std::vector<double>* interp) const;

 private:
  void near_correction(const LocalPoint& z, int skip_panel, std::vector<cplx>& row) const;
  std::vector<Mat2> densities() const;

  Contour contour_;
  JumpGenerator gen_;
  SolverOptions opt_;
  Discretization disc_;
  std::vector<Mat2> jumps_, W_;
  std::vector<double> ar_, ai_, or_, oi_, wr_, wi_;
  SolveDiagnostics diag_;
  bool solved_ = false;
};

// Closed form valid for t <= x: the inverse of the sectional factor that
// removes every jump. Upper half-plane: [[1, r e^{-2 i theta}], [0, 1]];
// lower: [[1, 0], [r e^{2 i theta}, 1]]. On R pass side Plus or Minus.
Mat2 solve_trivial_region(const ScatteringData& sd, const BroadeningTransform& tr, double t, double x,
                          const LocalPoint& z, Side side = Side::None);

// Scalar factor delta(z), thin wrapper for the operation list.
cplx delta_scalar(const ScatteringData& sd, double lambda1, double lambda2, cplx z, Side side = Side::None);

struct RHSettings {
  DeformMode mode = DeformMode::Finite;
  int nodes_per_piece = 128;
  double clustering = 4;
  double lambda2 = 0;  // 0: automatic; lambda1 = -lambda2 unless set
  double lambda1 = 0;
  LensShape lens;
  double ray_tolerance = 1e-16;  // truncate lens rays where |J - I| drops below
  double max_ray_length = 1e4;
  double cond_limit = 1e12;
  int delta_nodes = 200;
  int refine_levels = 16;  // geometric layers towards the support edges
  int refine_nodes = 8;
  int level_resolution = 400;  // infinite mode level-line samples
};

// Default lambda2 for the finite lens.
double default_lambda2(const ScatteringData& sd, const BroadeningTransform& tr, double xi);

// Solution of the basic problem at one (t, x): closed form for t <= x,
// deformed solve otherwise. Queries return the ORIGINAL M.
class RHSolution {
 public:
  static RHSolution compute(const ScatteringData& sd, const BroadeningTransform& tr, double t, double x,
                            const RHSettings& s);

  bool trivial() const { return !inst_; }
  double t() const { return t_; }
  double x() const { return x_; }
  const RHInstance* instance() const { return inst_.get(); }
  double lambda1() const { return l1_; }
  double lambda2() const { return l2_; }
  double re_e() const { return sd_->re_e(); }

  Sector sector(cplx z) const;
  // Original M off every contour.
  Mat2 M(cplx z) const;
  // Boundary value of the original M from above at real lambda inside
  // (lambda1, lambda2), lambda != Re E.
  Mat2 M_plus(double lambda) const;
  // Off-diagonal entries are those of the original problem; the diagonal
  // belongs to the deformed one (the delta factor is not folded in).
  Mat2 m() const;
  cplx field() const { return -4.0 * kI * m()(0, 1); }
  SolveDiagnostics diagnostics() const { return inst_ ? inst_->diagnostics() : SolveDiagnostics{}; }

 private:
  std::shared_ptr<const ScatteringData> sd_;
  std::shared_ptr<const BroadeningTransform> tr_;
  std::shared_ptr<RHInstance> inst_;
  std::shared_ptr<const DeltaFunction> delta_;
  DeformMode mode_ = DeformMode::Finite;
  double t_ = 0, x_ = 0, l1_ = 0, l2_ = 0, opening_ = kPi / 2;
  std::shared_ptr<const ArcShape> arc_;
  double arc_extent_ = 0;
};

}  // namespace mbrh
