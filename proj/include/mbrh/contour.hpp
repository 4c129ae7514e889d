// Oriented contours, their panel decomposition and collocation nodes.
// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "mbrh/common.hpp"
#include "mbrh/quadrature.hpp"

namespace mbrh {

enum class PieceKind { Segment, Ray, Line, Arc };

// What a piece stands for; the jump generator dispatches on this.
enum class PieceRole {
  RealLine,  // R, left to right
  Cut,       // (E, conj E), downward
  Interval,  // [lambda1, lambda2]
  L1,        // from lambda2 outward, upper
  L1bar,     // from lambda2 outward, lower
  L3,        // towards lambda1, upper
  L3bar,     // towards lambda1, lower
  L2,        // upper arc, left to right
  L2bar,     // lower arc, left to right
  RayRight,  // [lambda2, inf) on R (scalar problem)
  RayLeft,   // (-inf, lambda1] on R (scalar problem)
  Generic
};

std::string role_name(PieceRole r);

// Smooth graph z = lambda + i nu(lambda) with derivatives up to order 3.
struct ArcShape {
  std::function<double(double, int)> nu;
};

struct OrientedPiece {
  PieceKind kind = PieceKind::Segment;
  PieceRole role = PieceRole::Generic;
  cplx start{}, end{};    // finite endpoints (Segment, Arc)
  cplx direction{1, 0};  // unit direction for Ray / Line, pointing away from start
  bool inward = false;   // Ray traversed from infinity towards start
  // Arc: parameter range in lambda.
  double lam_start = 0, lam_end = 0;
  std::shared_ptr<const ArcShape> arc;
  // Interior points where the density is not smooth, ordered along the piece.
  std::vector<cplx> breakpoints;
  bool singular_start = false, singular_end = false;  // inverse fourth root
  // Breakpoints or endpoints where the jump oscillates like |s - s0|^(i a);
  // adjacent panels are split geometrically towards them.
  std::vector<cplx> refine_points;
  bool decays = false;  // jump - I decays along the infinite ends
  // Finite truncation length along each infinite end (from the start point
  // for rays, from the outermost breakpoint for lines); infinity keeps the
  // end and uses a rational map.
  double truncate_length = std::numeric_limits<double>::infinity();
};

struct Contour {
  std::vector<OrientedPiece> pieces;
  std::vector<cplx> intersections;
  bool conjugation_symmetric = false;
};

// R left-to-right plus the downward segment (E, conj E). extra_breaks adds
// interior points on R (e.g. support edges).
Contour build_sigma(cplx E, const std::vector<double>& extra_breaks = {});

enum class DeformMode { Finite, Infinite };

struct LensShape {
  double opening = kPi / 2;            // angle of L1 from the positive real axis
  std::vector<double> interval_breaks;  // interior points of [lambda1, lambda2]
  double arc_height = 0;  // L2 height at Re E (0: automatic)
  double arc_width = 0;   // L2 width scale (0: automatic)
  double arc_extent = 40;  // L2 lambda range [-extent, extent]
};

// level_upper: the sampled upper level-line branch (infinite mode only),
// level_lower its mirror.
Contour build_deformed_contour(DeformMode mode, cplx E, double lambda1, double lambda2,
                               const std::vector<cplx>& level_upper, const std::vector<cplx>& level_lower,
                               const LensShape& shape, double support);

enum class PanelMap { Affine, Mobius, Arc };

struct Panel {
  int piece = -1;
  PieceRole role = PieceRole::Generic;
  PanelMap map = PanelMap::Affine;
  cplx a{}, b{};        // affine ends; mobius finite end a
  cplx dir{1, 0};       // mobius direction of travel
  bool incoming = false;  // mobius: from infinity to a (u = +1 at a)
  double scale = 1;     // mobius length scale
  std::shared_ptr<const ArcShape> arc;
  double lam_a = 0, lam_b = 0;
  Grading grading = Grading::None;
  double exponent = 1;
  bool anchor_a = false, anchor_b = false;  // ends that are junctions / branch points
  int first = 0, count = 0;                 // node range

  cplx point(double u) const;        // s(u)
  cplx derivative(double u) const;   // s'(u)
  cplx second(double u) const;       // s''(u)
  cplx third(double u) const;        // s'''(u)
  double length_scale() const;
};

struct Node {
  cplx anchor{}, offset{};
  cplx z{};         // anchor + offset, rounded
  cplx weight{};    // physical quadrature weight (ds)
  double wu = 0;    // weight in the base parameter u
  double tau = 0, u = 0, p = 1, q = 1;
  cplx ds_du{};
  int panel = -1;
  Side side = Side::Plus;  // collocation uses the + boundary value
  LocalPoint local() const { return LocalPoint{anchor, offset}; }
};

struct Discretization {
  std::vector<Panel> panels;
  std::vector<Node> nodes;
  std::vector<int> piece_of_panel;
  double clustering = 4;
  int size() const { return static_cast<int>(nodes.size()); }
  // Differentiation matrices in tau per distinct rule size.
  const std::vector<double>& diff_matrix(int n) const;

 private:
  mutable std::vector<std::pair<int, std::shared_ptr<std::vector<double>>>> dcache_;
};

struct DiscretizeOptions {
  int nodes_per_piece = 64;
  double truncation_radius = std::numeric_limits<double>::infinity();
  double clustering = 4.0;
  double clearance = 0.0;
  // Minimum node count on any panel.
  int min_panel_nodes = 16;
  // Geometric splitting towards refine points: number of halvings and the
  // fixed node count on each extra layer (outside the piece budget).
  int refine_levels = 16;
  int refine_nodes = 8;
};

Discretization discretize(const Contour& c, const DiscretizeOptions& opt);

// Point on panel at base parameter u in local coordinates.
LocalPoint panel_point(const Panel& P, double u, double p, double q);

// JSON-like dump (pieces, endpoints, nodes, weights).
std::string dump_contour(const Contour& c, const Discretization* d = nullptr);

}  // namespace mbrh
