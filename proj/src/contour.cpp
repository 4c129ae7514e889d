// SPDX-License-Identifier: MIT
#include "mbrh/contour.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <mutex>
#include <sstream>

namespace mbrh {

std::string role_name(PieceRole r) {
  switch (r) {
    case PieceRole::RealLine: return "R";
    case PieceRole::Cut: return "cut";
    case PieceRole::Interval: return "interval";
    case PieceRole::L1: return "L1";
    case PieceRole::L1bar: return "L1bar";
    case PieceRole::L3: return "L3";
    case PieceRole::L3bar: return "L3bar";
    case PieceRole::L2: return "L2";
    case PieceRole::L2bar: return "L2bar";
    case PieceRole::RayRight: return "ray_right";
    case PieceRole::RayLeft: return "ray_left";
    case PieceRole::Generic: return "generic";
  }
  return "?";
}

Contour build_sigma(cplx E, const std::vector<double>& extra_breaks) {
  if (!(E.imag() > 0) || !std::isfinite(E.real()) || !std::isfinite(E.imag()))
    throw PreconditionError("build_sigma: Im E must be positive and finite");
  Contour c;
  OrientedPiece R;
  R.kind = PieceKind::Line;
  R.role = PieceRole::RealLine;
  R.direction = 1.0;
  std::vector<double> br{E.real()};
  for (double b : extra_breaks)
    if (std::isfinite(b)) br.push_back(b);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  for (double b : br) R.breakpoints.emplace_back(b, 0.0);
  for (double b : extra_breaks)
    if (std::isfinite(b)) R.refine_points.emplace_back(b, 0.0);
  R.decays = true;  // J - I = O(1/lambda)
  c.pieces.push_back(R);

  OrientedPiece S;
  S.kind = PieceKind::Segment;
  S.role = PieceRole::Cut;
  S.start = E;
  S.end = std::conj(E);
  S.breakpoints = {cplx(E.real(), 0.0)};
  S.singular_start = S.singular_end = true;
  c.pieces.push_back(S);
  c.intersections = {cplx(E.real(), 0.0)};
  c.conjugation_symmetric = true;
  return c;
}

namespace {

std::shared_ptr<const ArcShape> bump_arc(double re_e, double height, double width, double sign) {
  auto s = std::make_shared<ArcShape>();
  // nu(l) = sign * H / (1 + y^2)^2, y = (l - Re E)/W
  s->nu = [=](double l, int k) {
    const double y = (l - re_e) / width;
    const double g = 1 + y * y;
    const double H = sign * height;
    switch (k) {
      case 0: return H / (g * g);
      case 1: return H * (-4 * y / (g * g * g)) / width;
      case 2: return H * (20 * y * y - 4) / (g * g * g * g) / (width * width);
      default: return H * (72 * y - 120 * y * y * y) / (g * g * g * g * g) / (width * width * width);
    }
  };
  return s;
}

}  // namespace

Contour build_deformed_contour(DeformMode mode, cplx E, double lambda1, double lambda2,
                               const std::vector<cplx>& level_upper, const std::vector<cplx>& level_lower,
                               const LensShape& shape, double support) {
  if (!(E.imag() > 0)) throw PreconditionError("build_deformed_contour: Im E must be positive");
  Contour c;
  c.conjugation_symmetric = true;
  if (mode == DeformMode::Finite) {
    if (!(lambda1 < lambda2)) throw PreconditionError("build_deformed_contour: lambda1 < lambda2 required");
    if (std::isfinite(support) && !(lambda1 < -support && lambda2 > support))
      throw PreconditionError("build_deformed_contour: [lambda1, lambda2] must contain the support strictly");
    if (!(lambda1 < E.real() && lambda2 > E.real()))
      throw PreconditionError("build_deformed_contour: [lambda1, lambda2] must contain Re E strictly");
    const double phi = shape.opening;
    if (!(phi > 0 && phi < kPi)) throw PreconditionError("build_deformed_contour: opening must be in (0, pi)");

    OrientedPiece I;
    I.kind = PieceKind::Segment;
    I.role = PieceRole::Interval;
    I.start = lambda1;
    I.end = lambda2;
    std::vector<double> br{E.real()};
    if (std::isfinite(support)) {
      br.push_back(-support);
      br.push_back(support);
    }
    for (double b : shape.interval_breaks) br.push_back(b);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    for (double b : br)
      if (b > lambda1 && b < lambda2) I.breakpoints.emplace_back(b, 0.0);
    if (std::isfinite(support)) I.refine_points = {cplx(-support, 0.0), cplx(support, 0.0)};
    c.pieces.push_back(I);

    OrientedPiece S;
    S.kind = PieceKind::Segment;
    S.role = PieceRole::Cut;
    S.start = E;
    S.end = std::conj(E);
    S.breakpoints = {cplx(E.real(), 0.0)};
    S.singular_start = S.singular_end = true;
    c.pieces.push_back(S);

    auto ray = [&](PieceRole role, double at, double angle, bool inward) {
      OrientedPiece r;
      r.kind = PieceKind::Ray;
      r.role = role;
      r.start = at;
      r.direction = std::polar(1.0, angle);
      r.inward = inward;
      r.decays = true;
      c.pieces.push_back(r);
    };
    ray(PieceRole::L1, lambda2, phi, false);
    ray(PieceRole::L1bar, lambda2, -phi, false);
    ray(PieceRole::L3, lambda1, kPi - phi, true);
    ray(PieceRole::L3bar, lambda1, -(kPi - phi), true);
    c.intersections = {cplx(lambda1, 0), cplx(lambda2, 0), cplx(E.real(), 0)};
    return c;
  }

  // Infinite support: two arcs enclosing the cut.
  if (level_upper.size() != level_lower.size() || level_upper.size() < 2)
    throw PreconditionError("build_deformed_contour: level line samples missing");
  for (size_t i = 0; i < level_upper.size(); ++i)
    if (std::abs(level_upper[i] - std::conj(level_lower[i])) > 1e-12 * (1 + std::abs(level_upper[i])))
      throw PreconditionError("build_deformed_contour: level line not symmetric about R");
  const double extent = shape.arc_extent;
  double H = shape.arc_height > 0 ? shape.arc_height : 1.5 * E.imag() + 0.25;
  if (!(H > E.imag())) throw PreconditionError("build_deformed_contour: arc height must exceed Im E");
  double W = shape.arc_width;
  if (!(W > 0)) {
    // Largest width (halving from 4) keeping the arc below half the level
    // line away from Re E.
    W = 4.0;
    for (int it = 0; it < 40; ++it) {
      bool ok = true;
      for (const cplx& p : level_upper) {
        const double y = (p.real() - E.real()) / W;
        if (std::abs(y) <= 3) continue;
        const double g = 1 + y * y;
        if (H / (g * g) > 0.5 * p.imag()) {
          ok = false;
          break;
        }
      }
      if (ok) break;
      W *= 0.5;
    }
  }
  for (int sgn : {1, -1}) {
    OrientedPiece a;
    a.kind = PieceKind::Arc;
    a.role = sgn > 0 ? PieceRole::L2 : PieceRole::L2bar;
    a.arc = bump_arc(E.real(), H, W, sgn);
    a.lam_start = -extent;
    a.lam_end = extent;
    a.start = cplx(-extent, a.arc->nu(-extent, 0));
    a.end = cplx(extent, a.arc->nu(extent, 0));
    // Panel splits resolving the bump.
    std::vector<double> br;
    for (double k : {-9.0, -3.0, -1.0, 1.0, 3.0, 9.0}) {
      const double l = E.real() + k * W;
      if (l > -extent && l < extent) br.push_back(l);
    }
    for (double l : br) a.breakpoints.emplace_back(l, a.arc->nu(l, 0));
    c.pieces.push_back(a);
  }
  return c;
}

// ---------------------------------------------------------------- panels

cplx Panel::point(double u) const {
  switch (map) {
    case PanelMap::Affine: return 0.5 * (a + b) + 0.5 * (b - a) * u;
    case PanelMap::Mobius:
      return incoming ? a - scale * dir * ((1 - u) / (1 + u)) : a + scale * dir * ((1 + u) / (1 - u));
    case PanelMap::Arc: {
      const double l = 0.5 * (lam_a + lam_b) + 0.5 * (lam_b - lam_a) * u;
      return cplx(l, arc->nu(l, 0));
    }
  }
  return {};
}

cplx Panel::derivative(double u) const {
  switch (map) {
    case PanelMap::Affine: return 0.5 * (b - a);
    case PanelMap::Mobius: {
      const double d = incoming ? 1 + u : 1 - u;
      return 2.0 * scale * dir / (d * d);
    }
    case PanelMap::Arc: {
      const double h = 0.5 * (lam_b - lam_a);
      const double l = 0.5 * (lam_a + lam_b) + h * u;
      return h * cplx(1.0, arc->nu(l, 1));
    }
  }
  return {};
}

cplx Panel::second(double u) const {
  switch (map) {
    case PanelMap::Affine: return 0.0;
    case PanelMap::Mobius: {
      const double d = incoming ? 1 + u : 1 - u;
      const double s = incoming ? -1.0 : 1.0;
      return s * 4.0 * scale * dir / (d * d * d);
    }
    case PanelMap::Arc: {
      const double h = 0.5 * (lam_b - lam_a);
      const double l = 0.5 * (lam_a + lam_b) + h * u;
      return h * h * cplx(0.0, arc->nu(l, 2));
    }
  }
  return {};
}

cplx Panel::third(double u) const {
  switch (map) {
    case PanelMap::Affine: return 0.0;
    case PanelMap::Mobius: {
      const double d = incoming ? 1 + u : 1 - u;
      return 12.0 * scale * dir / (d * d * d * d);
    }
    case PanelMap::Arc: {
      const double h = 0.5 * (lam_b - lam_a);
      const double l = 0.5 * (lam_a + lam_b) + h * u;
      return h * h * h * cplx(0.0, arc->nu(l, 3));
    }
  }
  return {};
}

double Panel::length_scale() const {
  switch (map) {
    case PanelMap::Affine: return std::abs(b - a);
    case PanelMap::Mobius: return 2 * scale;
    case PanelMap::Arc: return std::abs(point(1) - point(-1));
  }
  return 1;
}

LocalPoint panel_point(const Panel& P, double u, double p, double q) {
  switch (P.map) {
    case PanelMap::Affine:
      if (u <= 0) return LocalPoint{P.a, 0.5 * (P.b - P.a) * p};
      return LocalPoint{P.b, -0.5 * (P.b - P.a) * q};
    case PanelMap::Mobius:
      if (P.incoming) return LocalPoint{P.a, -P.scale * P.dir * (q / p)};
      return LocalPoint{P.a, P.scale * P.dir * (p / q)};
    case PanelMap::Arc: {
      const double h = 0.5 * (P.lam_b - P.lam_a);
      if (u <= 0) {
        const double l = P.lam_a + h * p;
        return LocalPoint{cplx(P.lam_a, P.arc->nu(P.lam_a, 0)),
                          cplx(h * p, P.arc->nu(l, 0) - P.arc->nu(P.lam_a, 0))};
      }
      const double l = P.lam_b - h * q;
      return LocalPoint{cplx(P.lam_b, P.arc->nu(P.lam_b, 0)),
                        cplx(-h * q, P.arc->nu(l, 0) - P.arc->nu(P.lam_b, 0))};
    }
  }
  return {};
}

const std::vector<double>& Discretization::diff_matrix(int n) const {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  for (auto& e : dcache_)
    if (e.first == n) return *e.second;
  dcache_.emplace_back(n, std::make_shared<std::vector<double>>(differentiation_matrix(gauss_legendre(n))));
  return *dcache_.back().second;
}

namespace {

struct PanelDraft {
  Panel P;
  double weight;  // share of the piece budget
  int fixed = 0;  // > 0: node count set outside the budget
};

bool is_refine_point(const OrientedPiece& pc, cplx z) {
  for (cplx r : pc.refine_points)
    if (std::abs(r - z) <= 1e-13 * (1 + std::abs(r))) return true;
  return false;
}

// Replaces affine drafts that end at refine points by geometric chains.
std::vector<PanelDraft> refine_drafts(const OrientedPiece& pc, const std::vector<PanelDraft>& in, int levels,
                                      int nodes) {
  if (pc.refine_points.empty() || levels <= 0) return in;
  std::vector<PanelDraft> out;
  auto piece = [](cplx a, cplx b, bool ga, bool gb, double weight, int fixed) {
    PanelDraft dr;
    dr.P.map = PanelMap::Affine;
    dr.P.a = a;
    dr.P.b = b;
    dr.P.anchor_a = ga;
    dr.P.anchor_b = gb;
    dr.weight = weight;
    dr.fixed = fixed;
    return dr;
  };
  // A Mobius end anchored at a refine point gets an affine lead-in of one
  // length scale, which is then refined like any other segment.
  std::vector<PanelDraft> expanded;
  for (const PanelDraft& dr : in) {
    if (dr.P.map == PanelMap::Mobius && is_refine_point(pc, dr.P.a)) {
      const cplx far = dr.P.incoming ? dr.P.a - dr.P.scale * dr.P.dir : dr.P.a + dr.P.scale * dr.P.dir;
      PanelDraft lead = piece(dr.P.incoming ? far : dr.P.a, dr.P.incoming ? dr.P.a : far, !dr.P.incoming,
                              dr.P.incoming, dr.P.scale, 0);
      PanelDraft tail = dr;
      tail.P.a = far;
      tail.P.scale = 1 + std::abs(far);
      tail.P.anchor_a = tail.P.anchor_b = false;
      if (dr.P.incoming) {
        expanded.push_back(tail);
        expanded.push_back(lead);
      } else {
        expanded.push_back(lead);
        expanded.push_back(tail);
      }
    } else {
      expanded.push_back(dr);
    }
  }
  for (const PanelDraft& dr : expanded) {
    if (dr.P.map != PanelMap::Affine) {
      out.push_back(dr);
      continue;
    }
    const bool ra = dr.P.anchor_a && is_refine_point(pc, dr.P.a);
    const bool rb = dr.P.anchor_b && is_refine_point(pc, dr.P.b);
    if (!ra && !rb) {
      out.push_back(dr);
      continue;
    }
    const cplx a = dr.P.a, b = dr.P.b;
    cplx lo = a, hi = b;
    const double frac = (ra && rb) ? 0.25 : 0.5;
    // Layers towards a, in traversal order.
    std::vector<PanelDraft> head, tail;
    if (ra) {
      cplx inner = a + (b - a) * (frac * std::ldexp(1.0, -(levels - 1)));
      head.push_back(piece(a, inner, true, false, 0, nodes));
      for (int k = levels - 1; k >= 1; --k) {
        const cplx next = a + (b - a) * (frac * std::ldexp(1.0, -(k - 1)));
        head.push_back(piece(inner, next, false, false, 0, nodes));
        inner = next;
      }
      lo = inner;
    }
    if (rb) {
      cplx inner = b + (a - b) * (frac * std::ldexp(1.0, -(levels - 1)));
      tail.push_back(piece(inner, b, false, true, 0, nodes));
      for (int k = levels - 1; k >= 1; --k) {
        const cplx next = b + (a - b) * (frac * std::ldexp(1.0, -(k - 1)));
        tail.push_back(piece(next, inner, false, false, 0, nodes));
        inner = next;
      }
      hi = inner;
      std::reverse(tail.begin(), tail.end());
    }
    out.insert(out.end(), head.begin(), head.end());
    out.push_back(piece(lo, hi, ra ? false : dr.P.anchor_a, rb ? false : dr.P.anchor_b, std::abs(hi - lo), 0));
    out.insert(out.end(), tail.begin(), tail.end());
  }
  return out;
}

Grading grading_for(bool ga, bool gb) {
  if (ga && gb) return Grading::Both;
  if (ga) return Grading::Start;
  if (gb) return Grading::End;
  return Grading::None;
}

// Parameter s >= 0 with |a + s d| = R along a ray, or infinity.
double ray_cut(cplx a, cplx d, double R) {
  if (!std::isfinite(R)) return R;
  // s^2 + 2 Re(conj(a) d) s + |a|^2 - R^2 = 0
  const double bq = std::real(std::conj(a) * d);
  const double cq = std::norm(a) - R * R;
  const double disc = bq * bq - cq;
  if (disc < 0) return 0;
  return -bq + std::sqrt(disc);
}

}  // namespace

Discretization discretize(const Contour& c, const DiscretizeOptions& opt) {
  if (opt.nodes_per_piece < 2) throw PreconditionError("discretize: nodes_per_piece must be >= 2");
  if (!(opt.clustering >= 1)) throw PreconditionError("discretize: clustering exponent must be >= 1");
  Discretization d;
  d.clustering = opt.clustering;
  const double R = opt.truncation_radius;
  if (!(R > 0)) throw PreconditionError("discretize: truncation radius must be positive");

  for (int pi = 0; pi < static_cast<int>(c.pieces.size()); ++pi) {
    const OrientedPiece& pc = c.pieces[pi];
    std::vector<PanelDraft> drafts;
    auto affine = [&](cplx a, cplx b, bool ga, bool gb) {
      PanelDraft dr;
      dr.P.map = PanelMap::Affine;
      dr.P.a = a;
      dr.P.b = b;
      dr.P.anchor_a = ga;
      dr.P.anchor_b = gb;
      dr.weight = std::abs(b - a);
      drafts.push_back(dr);
    };
    auto mobius = [&](cplx a, cplx dir, bool incoming) {
      PanelDraft dr;
      dr.P.map = PanelMap::Mobius;
      dr.P.a = a;
      dr.P.dir = dir;
      dr.P.incoming = incoming;
      dr.P.scale = 1 + std::abs(a);
      (incoming ? dr.P.anchor_b : dr.P.anchor_a) = true;
      dr.weight = dr.P.scale;
      drafts.push_back(dr);
    };
    const bool infinite = pc.kind == PieceKind::Ray || pc.kind == PieceKind::Line;
    double trunc = std::min(pc.truncate_length, std::numeric_limits<double>::infinity());
    if (infinite && std::isfinite(R) && !pc.decays)
      throw PreconditionError("discretize: truncation requested on piece '" + role_name(pc.role) +
                              "' without a decay marker");

    switch (pc.kind) {
      case PieceKind::Segment: {
        std::vector<cplx> pts{pc.start};
        for (cplx b : pc.breakpoints) pts.push_back(b);
        pts.push_back(pc.end);
        for (size_t k = 0; k + 1 < pts.size(); ++k) affine(pts[k], pts[k + 1], true, true);
        break;
      }
      case PieceKind::Arc: {
        std::vector<double> lams{pc.lam_start};
        for (cplx b : pc.breakpoints) lams.push_back(b.real());
        lams.push_back(pc.lam_end);
        for (size_t k = 0; k + 1 < lams.size(); ++k) {
          PanelDraft dr;
          dr.P.map = PanelMap::Arc;
          dr.P.arc = pc.arc;
          dr.P.lam_a = lams[k];
          dr.P.lam_b = lams[k + 1];
          // Splits of a smooth arc are not singular points.
          dr.P.anchor_a = dr.P.anchor_b = false;
          dr.P.a = dr.P.point(-1);
          dr.P.b = dr.P.point(1);
          dr.weight = std::sqrt(std::abs(lams[k + 1] - lams[k]));
          drafts.push_back(dr);
        }
        break;
      }
      case PieceKind::Ray: {
        // Points along the ray measured from start, in traversal order.
        const cplx d = pc.direction;
        const double cut = std::min(trunc, ray_cut(pc.start, d, R));
        std::vector<cplx> br = pc.breakpoints;
        if (!pc.inward) {
          cplx a = pc.start;
          bool ga = true;
          for (cplx b : br) {
            affine(a, b, ga, true);
            a = b;
          }
          if (std::isfinite(cut))
            affine(a, pc.start + cut * d, true, false);
          else
            mobius(a, d, false);
        } else {
          // Travel direction is -d; breakpoints are listed in travel order.
          std::vector<cplx> pts;
          for (cplx b : br) pts.push_back(b);
          pts.push_back(pc.start);
          if (std::isfinite(cut))
            affine(pc.start + cut * d, pts.front(), false, true);
          else
            mobius(pts.front(), -d, true);
          for (size_t k = 0; k + 1 < pts.size(); ++k) affine(pts[k], pts[k + 1], true, true);
        }
        break;
      }
      case PieceKind::Line: {
        const cplx d = pc.direction;
        std::vector<cplx> br = pc.breakpoints;
        const double lim = std::isfinite(trunc) ? trunc : R;
        if (std::isfinite(lim)) {
          std::vector<cplx> pts{-lim * d};
          for (cplx b : br)
            if (std::abs(b) < lim) pts.push_back(b);
          pts.push_back(lim * d);
          for (size_t k = 0; k + 1 < pts.size(); ++k) affine(pts[k], pts[k + 1], k > 0, k + 2 < pts.size());
        } else {
          if (br.empty()) br.push_back(0.0);
          mobius(br.front(), d, true);
          for (size_t k = 0; k + 1 < br.size(); ++k) affine(br[k], br[k + 1], true, true);
          mobius(br.back(), d, false);
        }
        break;
      }
    }

    drafts = refine_drafts(pc, drafts, opt.refine_levels, opt.refine_nodes);

    // Share the node budget in proportion to panel size.
    double total = 0;
    int nfree = 0;
    for (auto& dr : drafts)
      if (dr.fixed == 0) {
        total += dr.weight;
        ++nfree;
      }
    const int np = static_cast<int>(drafts.size());
    const int budget = std::max(opt.nodes_per_piece, opt.min_panel_nodes * nfree);
    std::vector<int> counts(np, opt.min_panel_nodes);
    for (int k = 0; k < np; ++k)
      if (drafts[k].fixed > 0) counts[k] = drafts[k].fixed;
    int left = budget - opt.min_panel_nodes * nfree;
    std::vector<double> want(np, 0.0);
    for (int k = 0; k < np; ++k)
      if (drafts[k].fixed == 0) want[k] = left * drafts[k].weight / total;
    int given = 0;
    for (int k = 0; k < np; ++k) {
      const int w = static_cast<int>(std::floor(want[k]));
      counts[k] += w;
      given += w;
    }
    // Remainder by largest fractional part.
    std::vector<int> order(np);
    for (int k = 0; k < np; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return want[x] - std::floor(want[x]) > want[y] - std::floor(want[y]);
    });
    std::vector<int> free_order;
    for (int k : order)
      if (drafts[k].fixed == 0) free_order.push_back(k);
    for (int k = 0; given < left; ++k, ++given) counts[free_order[k % nfree]] += 1;

    for (int k = 0; k < np; ++k) {
      Panel P = drafts[k].P;
      P.piece = pi;
      P.role = pc.role;
      P.exponent = opt.clustering;
      P.grading = grading_for(P.anchor_a, P.anchor_b);
      P.first = d.size();
      P.count = counts[k];
      const GaussRule& g = gauss_legendre(P.count);
      for (int j = 0; j < P.count; ++j) {
        const GradedPoint gp = grade(P.grading, P.exponent, g.x[j], g.onepx[j], g.onemx[j]);
        Node nd;
        nd.tau = g.x[j];
        nd.u = gp.u;
        nd.p = gp.p;
        nd.q = gp.q;
        nd.wu = g.w[j] * gp.dudtau;
        nd.ds_du = P.derivative(gp.u);
        nd.weight = nd.wu * nd.ds_du;
        const LocalPoint lp = panel_point(P, gp.u, gp.p, gp.q);
        nd.anchor = lp.anchor;
        nd.offset = lp.offset;
        nd.z = lp.z();
        nd.panel = static_cast<int>(d.panels.size());
        const bool near_anchor = (nd.u <= 0 && P.anchor_a) || (nd.u > 0 && P.anchor_b) || P.map == PanelMap::Mobius;
        if (near_anchor && !(std::abs(nd.offset) > opt.clearance))
          throw NumericalError("discretize: node closer than the clearance to a junction on piece '" +
                               role_name(pc.role) + "'");
        if (!std::isfinite(nd.z.real()) || !std::isfinite(nd.z.imag()) || !std::isfinite(std::abs(nd.weight)))
          throw NumericalError("discretize: non-finite node");
        d.nodes.push_back(nd);
      }
      d.panels.push_back(P);
      d.piece_of_panel.push_back(pi);
    }
  }
  return d;
}

std::string dump_contour(const Contour& c, const Discretization* d) {
  using nlohmann::json;
  auto cj = [](cplx z) { return json::array({z.real(), z.imag()}); };
  json out;
  out["conjugation_symmetric"] = c.conjugation_symmetric;
  json inter = json::array();
  for (cplx z : c.intersections) inter.push_back(cj(z));
  out["intersections"] = inter;
  json pieces = json::array();
  for (size_t i = 0; i < c.pieces.size(); ++i) {
    const auto& p = c.pieces[i];
    json pj;
    const char* kinds[] = {"segment", "ray", "line", "arc"};
    pj["kind"] = kinds[static_cast<int>(p.kind)];
    pj["role"] = role_name(p.role);
    pj["start"] = cj(p.start);
    pj["end"] = cj(p.end);
    pj["direction"] = cj(p.direction);
    pj["inward"] = p.inward;
    pj["singular_start"] = p.singular_start;
    pj["singular_end"] = p.singular_end;
    pj["decays"] = p.decays;
    if (d) {
      json nodes = json::array(), weights = json::array();
      for (size_t k = 0; k < d->panels.size(); ++k) {
        if (d->piece_of_panel[k] != static_cast<int>(i)) continue;
        const Panel& P = d->panels[k];
        for (int j = P.first; j < P.first + P.count; ++j) {
          nodes.push_back(cj(d->nodes[j].z));
          weights.push_back(cj(d->nodes[j].weight));
        }
      }
      pj["nodes"] = nodes;
      pj["weights"] = weights;
    }
    pieces.push_back(pj);
  }
  out["pieces"] = pieces;
  return out.dump(1);
}

}  // namespace mbrh
