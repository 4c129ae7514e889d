// SPDX-License-Identifier: MIT
#include "mbrh/rhsolver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <tuple>

#include "mbrh/kernels.hpp"
#include "mbrh/quadrature.hpp"

extern "C" {
void zgetrf_(const int* m, const int* n, std::complex<double>* a, const int* lda, int* ipiv, int* info);
void zgetrs_(const char* trans, const int* n, const int* nrhs, const std::complex<double>* a, const int* lda,
             const int* ipiv, std::complex<double>* b, const int* ldb, int* info);
void zgecon_(const char* norm, const int* n, const std::complex<double>* a, const int* lda, const double* anorm,
             double* rcond, std::complex<double>* work, double* rwork, int* info);
double zlange_(const char* norm, const int* m, const int* n, const std::complex<double>* a, const int* lda,
               double* work);
}

namespace mbrh {

namespace {

cplx local_diff(const LocalPoint& a, const LocalPoint& b) { return (a.anchor - b.anchor) + (a.offset - b.offset); }

// s'(u)/(s(u) - s(v)) - 1/(u - v) on an arc panel; ds = s(u) - s(v).
cplx arc_kernel(const Panel& P, double u, double v, cplx ds) {
  const double h = u - v;
  if (std::abs(h) < 1e-3) {
    const cplx d1 = P.derivative(v), d2 = P.second(v), d3 = P.third(v);
    return d2 / (2.0 * d1) + h * (d3 / (3.0 * d1) - d2 * d2 / (4.0 * d1 * d1));
  }
  return P.derivative(u) / ds - 1.0 / h;
}

}  // namespace

RHInstance::RHInstance(Contour c, JumpGenerator g, const SolverOptions& opt)
    : contour_(std::move(c)), gen_(std::move(g)), opt_(opt) {
  disc_ = discretize(contour_, opt_.disc);
  const int n = disc_.size();
  jumps_.resize(n);
  ar_.resize(n);
  ai_.resize(n);
  or_.resize(n);
  oi_.resize(n);
  wr_.resize(n);
  wi_.resize(n);
  for (int j = 0; j < n; ++j) {
    const Node& nd = disc_.nodes[j];
    ar_[j] = nd.anchor.real();
    ai_[j] = nd.anchor.imag();
    or_[j] = nd.offset.real();
    oi_[j] = nd.offset.imag();
    wr_[j] = nd.weight.real();
    wi_[j] = nd.weight.imag();
    const Mat2 J = gen_.jump(disc_.panels[nd.panel].role, nd.local());
    if (!J.allFinite()) throw NumericalError("RHInstance: non-finite jump at a node on '" +
                                             role_name(disc_.panels[nd.panel].role) + "'");
    jumps_[j] = J;
  }
}

LocalPoint RHInstance::point(const ContourPoint& cp) const {
  const Panel& P = disc_.panels.at(cp.panel);
  const double u = cp.p <= 1 ? cp.p - 1 : 1 - cp.q;
  return panel_point(P, u, cp.p, cp.q);
}

Mat2 RHInstance::jump_at(const ContourPoint& cp) const {
  return gen_.jump(disc_.panels.at(cp.panel).role, point(cp));
}

ContourPoint RHInstance::at_tau(int panel, double tau) const {
  const Panel& P = disc_.panels.at(panel);
  const GradedPoint gp = grade(P.grading, P.exponent, tau, 1 + tau, 1 - tau);
  return ContourPoint{panel, gp.p, gp.q};
}

namespace {

// Preimage of z in the base parameter of an affine or Mobius panel, as
// (1 + u_z, 1 - u_z).
std::pair<cplx, cplx> preimage(const Panel& Q, const LocalPoint& z) {
  if (Q.map == PanelMap::Affine) {
    const cplx half = 0.5 * (Q.b - Q.a);
    const cplx pz = ((z.anchor - Q.a) + z.offset) / half;
    const cplx qz = ((Q.b - z.anchor) - z.offset) / half;
    return {pz, qz};
  }
  const cplx Ld = Q.scale * Q.dir;
  if (!Q.incoming) {
    const cplx w = ((z.anchor - Q.a) + z.offset) / Ld;
    return {2.0 * w / (w + 1.0), 2.0 / (w + 1.0)};
  }
  const cplx w = ((Q.a - z.anchor) - z.offset) / Ld;
  return {2.0 / (1.0 + w), 2.0 * w / (1.0 + w)};
}

}  // namespace

std::optional<ContourPoint> RHInstance::locate_real(PieceRole role, double lambda) const {
  for (int k = 0; k < static_cast<int>(disc_.panels.size()); ++k) {
    const Panel& P = disc_.panels[k];
    if (P.role != role || P.map == PanelMap::Arc) continue;
    if (P.a.imag() != 0.0 || (P.map == PanelMap::Affine ? P.b.imag() : P.dir.imag()) != 0.0) continue;
    const auto [p, q] = preimage(P, at(cplx(lambda, 0)));
    if (p.imag() != 0.0 || q.imag() != 0.0) continue;
    if (!(p.real() > 0 && q.real() > 0)) continue;
    return ContourPoint{k, p.real(), q.real()};
  }
  return std::nullopt;
}

namespace {

// Adaptive Gauss rule on a base-parameter interval [alpha, beta] kept as
// (1 + alpha, 1 + beta) and (1 - beta, 1 - alpha) for accuracy at both ends.
// log(1 + x) without cancellation for small x.
cplx log1p_complex(cplx x) {
  const cplx w = 1.0 + x;
  if (w == 1.0) return x;
  if (std::abs(x) > 0.5) return std::log(w);
  return std::log(w) * (x / (w - 1.0));
}

struct TauInterval {
  double lo1, hi1, lo2, hi2;
};

}  // namespace

// Replaces the plain quadrature entries of every panel the target is close
// to by product weights: the density is interpolated on the panel and the
// kernel is integrated by adaptive Gauss rules in the panel parameter, with
// subdivision driven by the exactly known integral of the pole term.
void RHInstance::near_correction(const LocalPoint& z, int skip, std::vector<cplx>& row) const {
  const GaussRule& g16 = gauss_legendre(16);
  for (int k = 0; k < static_cast<int>(disc_.panels.size()); ++k) {
    if (k == skip) continue;
    const Panel& Q = disc_.panels[k];
    const bool straight = Q.map != PanelMap::Arc;
    cplx pz = 0, qz = 0;
    if (straight) std::tie(pz, qz) = preimage(Q, z);
    // Singular part of the kernel at (1+u, 1-u) and its exact integral.
    auto sing = [&](double p, double q) -> cplx { return (p <= 1) ? 1.0 / (p - pz) : 1.0 / (qz - q); };
    auto diff_u = [&](double p, double q) -> cplx { return (p <= 1) ? p - pz : qz - q; };
    const cplx zz = z.z();
    // Exact integral of the pole term from a to b; ds is s(b) - s(a) (or
    // u(b) - u(a)), supplied separately to avoid cancellation on short pieces.
    auto exact = [&](double pa, double qa, cplx ds) -> cplx {
      if (straight) return log1p_complex(ds / diff_u(pa, qa));
      const double ua = pa <= 1 ? pa - 1 : 1 - qa;
      return log1p_complex(ds / (Q.point(ua) - zz));
    };
    // Far test with the panel's own nodes.
    {
      cplx gsum = 0;
      for (int j = 0; j < Q.count; ++j) {
        const Node& nd = disc_.nodes[Q.first + j];
        gsum += straight ? nd.wu * sing(nd.p, nd.q) : nd.weight / (nd.z - zz);
      }
      const cplx ex = exact(0.0, 2.0, straight ? cplx(2.0) : Q.point(1.0) - Q.point(-1.0));
      if (std::abs(gsum - ex) <= 1e-14 * std::max(1.0, std::abs(ex))) continue;
      if (!std::isfinite(std::abs(ex))) throw PreconditionError("Cauchy evaluation on the contour without a side");
    }
    const GaussRule& gq = gauss_legendre(Q.count);
    // On a Mobius panel the pole term pairs with the smooth remainder; near
    // the end at infinity their sum carries the factor 1 -+ u_z.
    double weight_scale = 1;
    if (Q.map == PanelMap::Mobius) weight_scale = std::min(1.0, std::abs(Q.incoming ? pz : qz));
    std::vector<cplx> c(Q.count, 0.0);
    std::vector<TauInterval> stack{{0.0, 2.0, 0.0, 2.0}};
    int pieces = 0;
    std::vector<double> gp_w(16), gp_tau(16);
    std::vector<cplx> gp_k(16);
    while (!stack.empty()) {
      const TauInterval iv = stack.back();
      stack.pop_back();
      const double half = 0.5 * (iv.hi1 - iv.lo1);
      cplx approx = 0, span = 0;
      double mag = 0;
      for (int i = 0; i < 16; ++i) {
        const double op = iv.lo1 + half * g16.onepx[i];
        const double om = iv.lo2 + half * g16.onemx[i];
        const GradedPoint gp = grade(Q.grading, Q.exponent, op <= 1 ? op - 1 : 1 - om, op, om);
        cplx kv;
        if (straight) {
          kv = gp.dudtau * sing(gp.p, gp.q);
          span += half * g16.w[i] * gp.dudtau;
        } else {
          const cplx sd = Q.derivative(gp.u);
          kv = gp.dudtau * sd / (Q.point(gp.u) - zz);
          span += half * g16.w[i] * gp.dudtau * sd;
        }
        gp_w[i] = half * g16.w[i];
        gp_tau[i] = op <= 1 ? op - 1 : 1 - om;
        gp_k[i] = kv;
        approx += gp_w[i] * kv;
        mag += std::abs(gp_w[i] * kv);
      }
      const GradedPoint ga = grade(Q.grading, Q.exponent, iv.lo1 <= 1 ? iv.lo1 - 1 : 1 - iv.hi2, iv.lo1, iv.hi2);
      const cplx ex = exact(ga.p, ga.q, span);
      ++pieces;
      const bool ok = std::abs(approx - ex) <= 1e-15 + 1e-14 * mag || mag * weight_scale < 1e-17 || half < 1e-10 ||
                      pieces > 4000;
      if (!ok) {
        const double m1 = 0.5 * (iv.lo1 + iv.hi1), m2 = 0.5 * (iv.lo2 + iv.hi2);
        stack.push_back({iv.lo1, m1, m2, iv.hi2});
        stack.push_back({m1, iv.hi1, iv.lo2, m2});
        continue;
      }
      for (int i = 0; i < 16; ++i) {
        const std::vector<double> l = lagrange_weights(gq, gp_tau[i]);
        const cplx f = gp_w[i] * gp_k[i];
        for (int j = 0; j < Q.count; ++j) c[j] += f * l[j];
      }
    }
    // Smooth remainder of the Mobius kernel on the panel's own nodes.
    if (Q.map == PanelMap::Mobius)
      for (int j = 0; j < Q.count; ++j) {
        const Node& nd = disc_.nodes[Q.first + j];
        c[j] += nd.wu * (Q.incoming ? -1.0 / nd.p : 1.0 / nd.q);
      }
    for (int j = 0; j < Q.count; ++j) row[Q.first + j] = c[j];
  }
}

void RHInstance::cauchy_row(const LocalPoint& z, int own, double pv, double qv, int own_node,
                            std::vector<cplx>& row, std::vector<double>* interp) const {
  const int n = disc_.size();
  row.assign(n, 0.0);
  std::vector<double> re(n), im(n);
  kernels::NodeArrays na{ar_.data(), ai_.data(), or_.data(), oi_.data(), wr_.data(), wi_.data(), n};
  kernels::cauchy(na, z.anchor, z.offset, re.data(), im.data());
  for (int j = 0; j < n; ++j) row[j] = cplx(re[j], im[j]);
  near_correction(z, own, row);

  if (own >= 0) {
    const Panel& P = disc_.panels[own];
    const GaussRule& g = gauss_legendre(P.count);
    const double v = pv <= 1 ? pv - 1 : 1 - qv;
    std::vector<cplx> c(P.count, 0.0);
    std::vector<double> l;
    int kk = -1;
    if (own_node >= 0) {
      kk = own_node - P.first;
      l.assign(P.count, 0.0);
      l[kk] = 1.0;
    } else {
      const UngradedPoint ug = ungrade_local(P.grading, P.exponent, pv, qv);
      l = lagrange_weights(g, ug.tau);
      for (int j = 0; j < P.count; ++j)
        if (g.x[j] == ug.tau) kk = j;  // target sits on a node
    }
    double sumw = 0;
    for (int j = 0; j < P.count; ++j) {
      const Node& nd = disc_.nodes[P.first + j];
      if (j == kk) continue;
      const double d = v <= 0 ? nd.p - pv : qv - nd.q;
      c[j] += nd.wu / d;
      sumw += nd.wu / d;
    }
    for (int j = 0; j < P.count; ++j) {
      const Node& nd = disc_.nodes[P.first + j];
      cplx K = 0;
      switch (P.map) {
        case PanelMap::Affine: break;
        case PanelMap::Mobius: K = P.incoming ? -1.0 / nd.p : 1.0 / nd.q; break;
        case PanelMap::Arc: {
          const double h = j == kk ? 0.0 : (v <= 0 ? nd.p - pv : qv - nd.q);
          K = arc_kernel(P, nd.u, v, local_diff(nd.local(), z));
          if (j == kk) K = arc_kernel(P, nd.u, nd.u, 0.0);
          (void)h;
          break;
        }
      }
      c[j] += nd.wu * K;
    }
    const double lg = std::log(qv) - std::log(pv);
    for (int j = 0; j < P.count; ++j) c[j] += l[j] * (lg - sumw);
    if (kk >= 0) {
      const std::vector<double>& D = disc_.diff_matrix(P.count);
      for (int m = 0; m < P.count; ++m) c[m] += g.w[kk] * D[kk * P.count + m];
    }
    for (int j = 0; j < P.count; ++j) row[P.first + j] = c[j];
    if (interp) *interp = l;
  }
  const cplx scale = 1.0 / (2.0 * kPi * kI);
  for (auto& v : row) v *= scale;
}

void RHInstance::solve() {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = disc_.size();
  const int N = 2 * n;
  std::vector<cplx> A(static_cast<size_t>(N) * N, 0.0), B(static_cast<size_t>(N) * 2, 0.0);
  std::vector<Mat2> IJ(n);
  for (int j = 0; j < n; ++j) IJ[j] = Mat2::Identity() - jumps_[j];
  std::vector<cplx> row;
  std::vector<double> interp;
  for (int k = 0; k < n; ++k) {
    const Node& nd = disc_.nodes[k];
    cauchy_row(nd.local(), nd.panel, nd.p, nd.q, k, row, &interp);
    row[k] += 0.5;  // C_+ = 1/2 + p.v.
    for (int j = 0; j < n; ++j) {
      const cplx c = row[j];
      if (c == 0.0) continue;
      for (int f = 0; f < 2; ++f) {
        for (int e = 0; e < 2; ++e) A[(2 * k + f) + static_cast<size_t>(2 * j + e) * N] -= c * IJ[j](e, f);
        for (int d = 0; d < 2; ++d) B[(2 * k + f) + static_cast<size_t>(d) * N] += c * IJ[j](d, f);
      }
    }
  }
  for (int i = 0; i < N; ++i) A[i + static_cast<size_t>(i) * N] += 1.0;
  for (const auto& v : A)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericalError("solve_rh: non-finite matrix entry");

  std::vector<cplx> Acopy = A;
  const std::vector<cplx> Bcopy = B;
  std::vector<double> rwork(2 * static_cast<size_t>(N));
  const double anorm = zlange_("1", &N, &N, A.data(), &N, rwork.data());
  std::vector<int> ipiv(N);
  int info = 0;
  zgetrf_(&N, &N, A.data(), &N, ipiv.data(), &info);
  if (info != 0) {
    std::ostringstream os;
    os << "solve_rh: singular system (zgetrf info " << info << ", " << n << " nodes)";
    throw NumericalError(os.str());
  }
  double rcond = 0;
  std::vector<cplx> work(2 * static_cast<size_t>(N));
  zgecon_("1", &N, A.data(), &N, &anorm, &rcond, work.data(), rwork.data(), &info);
  diag_.nodes = n;
  diag_.cond_estimate = rcond > 0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(diag_.cond_estimate <= opt_.cond_limit)) {
    std::ostringstream os;
    os << "solve_rh: condition estimate " << diag_.cond_estimate << " exceeds " << opt_.cond_limit << " ("
       << n << " nodes)";
    throw NumericalError(os.str());
  }
  const int nrhs = 2;
  zgetrs_("N", &N, &nrhs, A.data(), &N, ipiv.data(), B.data(), &N, &info);
  if (info != 0) throw NumericalError("solve_rh: zgetrs failed");

  // relative residual of the collocated system
  double rmax = 0, xmax = 0, bmax = 0;
  for (int d = 0; d < 2; ++d) {
    for (int i = 0; i < N; ++i) {
      cplx acc = -Bcopy[i + static_cast<size_t>(d) * N];
      for (int j = 0; j < N; ++j) acc += Acopy[i + static_cast<size_t>(j) * N] * B[j + static_cast<size_t>(d) * N];
      rmax = std::max(rmax, std::abs(acc));
      xmax = std::max(xmax, std::abs(B[i + static_cast<size_t>(d) * N]));
      bmax = std::max(bmax, std::abs(Bcopy[i + static_cast<size_t>(d) * N]));
    }
  }
  diag_.linear_residual = rmax / (anorm * xmax + bmax + 1e-300);

  W_.assign(n, Mat2::Zero());
  for (int k = 0; k < n; ++k)
    for (int d = 0; d < 2; ++d)
      for (int e = 0; e < 2; ++e) W_[k](d, e) = B[(2 * k + e) + static_cast<size_t>(d) * N];
  for (const auto& w : W_)
    if (!w.allFinite()) throw NumericalError("solve_rh: non-finite solution");
  solved_ = true;
  diag_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<Mat2> RHInstance::densities() const {
  if (!solved_) throw PreconditionError("RHInstance: not solved");
  std::vector<Mat2> f(W_.size());
  for (size_t j = 0; j < W_.size(); ++j) f[j] = (Mat2::Identity() + W_[j]) * (Mat2::Identity() - jumps_[j]);
  return f;
}

Mat2 RHInstance::M(const LocalPoint& z) const {
  const std::vector<Mat2> f = densities();
  std::vector<cplx> row;
  cauchy_row(z, -1, 1, 1, -1, row, nullptr);
  Mat2 out = Mat2::Identity();
  for (size_t j = 0; j < f.size(); ++j) out += row[j] * f[j];
  return out;
}

Mat2 RHInstance::boundary(const ContourPoint& cp, Side side) const {
  if (side == Side::None) throw PreconditionError("boundary: side required");
  const std::vector<Mat2> f = densities();
  std::vector<cplx> row;
  std::vector<double> l;
  cauchy_row(point(cp), cp.panel, cp.p, cp.q, -1, row, &l);
  const Panel& P = disc_.panels[cp.panel];
  const double half = side == Side::Plus ? 0.5 : -0.5;
  for (int j = 0; j < P.count; ++j) row[P.first + j] += half * l[j];
  Mat2 out = Mat2::Identity();
  for (size_t j = 0; j < f.size(); ++j) out += row[j] * f[j];
  return out;
}

Mat2 RHInstance::moment() const {
  const std::vector<Mat2> f = densities();
  Mat2 s = Mat2::Zero();
  for (size_t j = 0; j < f.size(); ++j) s += disc_.nodes[j].weight * f[j];
  return -s / (2.0 * kPi * kI);
}

// ------------------------------------------------------------ closed form

Mat2 solve_trivial_region(const ScatteringData& sd, const BroadeningTransform& tr, double t, double x,
                          const LocalPoint& z, Side side) {
  if (t > x) throw PreconditionError("solve_trivial_region: requires t <= x");
  if (t < 0 || x < 0) throw PreconditionError("solve_trivial_region: requires t, x >= 0");
  const cplx v = z.z();
  const bool real = v.imag() == 0.0;
  if (real && side == Side::None) throw PreconditionError("solve_trivial_region: side required on R");
  const bool upper = real ? side == Side::Plus : v.imag() > 0;
  const PhaseField ph(tr, t, x);
  const cplx th = ph.theta(z, real ? side : Side::None);
  const cplx r = sd.on_cut(z) ? sd.r(z, side) : sd.r(z);
  if (upper) return mat2(1.0, r * std::exp(-2.0 * kI * th), 0.0, 1.0);
  return mat2(1.0, 0.0, r * std::exp(2.0 * kI * th), 1.0);
}

cplx delta_scalar(const ScatteringData& sd, double lambda1, double lambda2, cplx z, Side side) {
  return DeltaFunction(sd, lambda1, lambda2).value(z, side);
}

double default_lambda2(const ScatteringData& sd, const BroadeningTransform& tr, double xi) {
  const double L = tr.profile().support();
  const double base = std::max(std::isfinite(L) ? L : 0.0, std::abs(sd.E()));
  const double s = std::isfinite(xi) ? std::sqrt(xi) : 0.0;
  return base + 2 * std::max(2.0, s);
}

// ------------------------------------------------------------- solution

namespace {

double ray_length(const JumpGenerator& g, const OrientedPiece& pc, double tol, double cap) {
  auto size = [&](double s) {
    const Mat2 J = g.jump(pc.role, at(pc.start + s * pc.direction));
    return (J - Mat2::Identity()).cwiseAbs().maxCoeff();
  };
  double hi = 1;
  while (!(size(hi) < tol)) {
    hi *= 2;
    if (hi > cap) {
      std::ostringstream os;
      os << "lens ray '" << role_name(pc.role) << "' needs more than " << cap << " units to decay";
      throw NumericalError(os.str());
    }
  }
  double lo = hi / 2;
  if (hi == 1) return 1;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (size(mid) < tol)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

RHSolution RHSolution::compute(const ScatteringData& sd, const BroadeningTransform& tr, double t, double x,
                               const RHSettings& s) {
  if (!(t >= 0 && x >= 0)) throw PreconditionError("RHSolution: t, x must be nonnegative");
  RHSolution out;
  out.sd_ = std::make_shared<const ScatteringData>(sd);
  out.tr_ = std::make_shared<const BroadeningTransform>(tr);
  out.t_ = t;
  out.x_ = x;
  out.mode_ = s.mode;
  if (t <= x) return out;

  const PhaseField ph(tr, t, x);
  const double xi = ph.xi();
  SolverOptions opt;
  opt.disc.nodes_per_piece = s.nodes_per_piece;
  opt.disc.clustering = s.clustering;
  opt.cond_limit = s.cond_limit;
  opt.disc.refine_levels = s.refine_levels;
  opt.disc.refine_nodes = s.refine_nodes;

  if (s.mode == DeformMode::Finite) {
    const double L = tr.profile().support();
    if (!std::isfinite(L)) throw PreconditionError("RHSolution: finite lens needs a compact profile");
    out.l2_ = s.lambda2 > 0 ? s.lambda2 : default_lambda2(sd, tr, xi);
    out.l1_ = s.lambda1 < 0 ? s.lambda1 : -out.l2_;
    out.opening_ = s.lens.opening;
    out.delta_ = std::make_shared<const DeltaFunction>(sd, out.l1_, out.l2_, s.delta_nodes);
    Contour c = build_deformed_contour(DeformMode::Finite, sd.E(), out.l1_, out.l2_, {}, {}, s.lens, L);
    JumpGenerator g = JumpGenerator::finite(sd, tr, t, x, out.delta_);
    for (auto& pc : c.pieces)
      if (pc.kind == PieceKind::Ray) pc.truncate_length = ray_length(g, pc, s.ray_tolerance, s.max_ray_length);
    out.inst_ = std::make_shared<RHInstance>(std::move(c), std::move(g), opt);
  } else {
    const LevelLine ll = level_line(tr, xi, s.level_resolution, s.lens.arc_extent);
    Contour c = build_deformed_contour(DeformMode::Infinite, sd.E(), 0, 0, ll.upper, ll.lower, s.lens,
                                       tr.profile().support());
    out.arc_ = c.pieces[0].arc;
    out.arc_extent_ = s.lens.arc_extent;
    JumpGenerator g = JumpGenerator::infinite(sd, tr, t, x);
    out.inst_ = std::make_shared<RHInstance>(std::move(c), std::move(g), opt);
  }
  out.inst_->solve();
  return out;
}

Sector RHSolution::sector(cplx z) const {
  if (trivial()) return Sector::Outside;
  if (mode_ == DeformMode::Finite) {
    const double phi = opening_;
    if (z.imag() > 0) {
      if (std::arg(z - l2_) < phi) return Sector::D1;
      if (std::arg(z - l1_) > kPi - phi) return Sector::D3;
    } else if (z.imag() < 0) {
      if (std::arg(z - l2_) > -phi) return Sector::D1bar;
      if (std::arg(z - l1_) < -(kPi - phi)) return Sector::D3bar;
    }
    return Sector::Outside;
  }
  if (std::abs(z.real()) >= arc_extent_) return Sector::Outside;
  const double nu = arc_->nu(z.real(), 0);
  if (z.imag() > 0 && z.imag() < nu) return Sector::D2;
  if (z.imag() < 0 && z.imag() > -nu) return Sector::D2bar;
  return Sector::Outside;
}

Mat2 RHSolution::M(cplx z) const {
  if (trivial()) return solve_trivial_region(*sd_, *tr_, t_, x_, at(z));
  const Mat2 M2 = inst_->M(z);
  const Sector sec = sector(z);
  const Mat2 G = inst_->generator().sector_factor(sec, z);
  const Mat2 Ginv = 2.0 * Mat2::Identity() - G;  // unipotent triangular
  Mat2 out = M2 * Ginv;
  if (mode_ == DeformMode::Finite) {
    const cplx d = delta_->value(z);
    out.col(0) /= d;
    out.col(1) *= d;
  }
  return out;
}

Mat2 RHSolution::M_plus(double lambda) const {
  if (trivial()) return solve_trivial_region(*sd_, *tr_, t_, x_, at(cplx(lambda, 0)), Side::Plus);
  if (mode_ == DeformMode::Finite) {
    const auto cp = inst_->locate_real(PieceRole::Interval, lambda);
    if (!cp) throw PreconditionError("M_plus: lambda outside (lambda1, lambda2) or at a junction");
    Mat2 out = inst_->boundary(*cp, Side::Plus);
    const cplx d = delta_->value(cplx(lambda, 0));
    out.col(0) /= d;
    out.col(1) *= d;
    return out;
  }
  // Infinite mode: R carries no jump of the deformed problem.
  const LocalPoint p = at(cplx(lambda, 0));
  const Mat2 M2 = inst_->M(p);
  if (std::abs(lambda) >= arc_extent_) return M2;
  const PhaseField ph(*tr_, t_, x_);
  const cplx P12 = -sd_->r(p) * std::exp(-2.0 * kI * ph.theta(p, Side::Plus));
  return M2 * mat2(1.0, -P12, 0.0, 1.0);
}

Mat2 RHSolution::m() const {
  if (trivial()) return Mat2::Zero();
  return inst_->moment();
}

}  // namespace mbrh
