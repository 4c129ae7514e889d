#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "mbrh/rhsolver.hpp"

using namespace mbrh;

namespace {

struct BoxSetup {
  BroadeningTransform tr{BroadeningProfile::box(1.0)};
  ScatteringData sd{endpoint_from_boundary(1.0, 1.0, tr)};
};

double max_abs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

const std::vector<cplx>& probes() {
  static const std::vector<cplx> p{{0.3, 0.8},  {-2, 1},   {1.5, -0.7}, {0, -2},  {3, 0.2},
                                   {-0.5, 1.2}, {0.2, -0.3}, {-4, -1},  {10, 3}, {0.7, 0.25}};
  return p;
}

// Held-out points: fixed Gauss parameters that are never collocation nodes,
// skipping panels that touch the support edges (where the jump itself
// oscillates without limit).
double held_out_jump_residual(const RHInstance& I, double support) {
  double worst = 0;
  const auto& d = I.discretization();
  for (int k = 0; k < static_cast<int>(d.panels.size()); ++k) {
    const Panel& P = d.panels[k];
    bool near_edge = false;
    for (double e : {-support, support})
      near_edge = near_edge || std::abs(P.a - cplx(e, 0)) < 1e-3 || std::abs(P.b - cplx(e, 0)) < 1e-3;
    if (near_edge) continue;
    for (double tau : {-0.55, -0.13, 0.31, 0.77}) {
      const ContourPoint cp = I.at_tau(k, tau);
      const Mat2 Mp = I.boundary(cp, Side::Plus), Mm = I.boundary(cp, Side::Minus);
      worst = std::max(worst, max_abs(Mm - Mp * I.jump_at(cp)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("original jumps have unit determinant and the stated symmetries") {
  BoxSetup s;
  const JumpGenerator g = JumpGenerator::original(s.sd, s.tr, 1.3, 0.4);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> lam(-6, 6), frac(0.02, 0.98);
  const cplx E = s.sd.E();
  for (int i = 0; i < 100; ++i) {
    double l = lam(rng);
    if (std::abs(l - E.real()) < 1e-3 || std::abs(std::abs(l) - 1) < 1e-3) l += 0.01;
    const Mat2 J = g.jump(PieceRole::RealLine, cplx(l, 0));
    CHECK(std::abs(J.determinant() - 1.0) < 1e-12);
    CHECK(max_abs(J - J.adjoint()) < 1e-12);
    if (std::abs(l) > 1) CHECK(J(0, 0).real() > 1.0);

    const double f = frac(rng);
    const cplx up(E.real(), f * E.imag());
    const Mat2 Ju = g.jump(PieceRole::Cut, up), Jd = g.jump(PieceRole::Cut, std::conj(up));
    CHECK(std::abs(Ju.determinant() - 1.0) < 1e-12);
    CHECK(std::abs(Jd.determinant() - 1.0) < 1e-12);
    CHECK(max_abs(sigma2() * Jd.conjugate() * sigma2() - Ju) < 1e-12);
  }
  // The jump tends to I at the endpoint of the cut.
  CHECK(max_abs(g.jump(PieceRole::Cut, E - cplx(0, 1e-12)) - Mat2::Identity()) < 1e-4);
}

TEST_CASE("deformed jumps keep unit determinant") {
  BoxSetup s;
  auto delta = std::make_shared<const DeltaFunction>(s.sd, -5.0, 5.0);
  const JumpGenerator g = JumpGenerator::finite(s.sd, s.tr, 1.0, 0.5, delta);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 100; ++i) {
    const double a = u(rng);
    CHECK(std::abs(g.jump(PieceRole::Interval, cplx(-5 + 10 * a + 1e-3, 0)).determinant() - 1.0) < 1e-10);
    CHECK(std::abs(g.jump(PieceRole::L1, cplx(5, 30 * a)).determinant() - 1.0) < 1e-10);
    CHECK(std::abs(g.jump(PieceRole::L3bar, cplx(-5, -30 * a)).determinant() - 1.0) < 1e-10);
  }
  CHECK_THROWS_AS(g.jump(PieceRole::L2, cplx(0, 1)), PreconditionError);
}

TEST_CASE("identity jump gives a vanishing unknown") {
  BoxSetup s;
  SolverOptions o;
  o.disc.nodes_per_piece = 48;
  RHInstance I(build_sigma(s.sd.E(), {-1.0, 1.0}),
               JumpGenerator::custom([](PieceRole, const LocalPoint&) { return Mat2::Identity(); }), o);
  I.solve();
  for (const Mat2& w : I.W()) CHECK(max_abs(w) == 0.0);
  CHECK(max_abs(I.M(cplx(0.3, 0.4)) - Mat2::Identity()) == 0.0);
}

TEST_CASE("light-front solve on the original contour matches the closed form") {
  BoxSetup s;
  SolverOptions o;
  o.disc.nodes_per_piece = 128;
  const double t = 0.5, x = 0.5;
  RHInstance I(build_sigma(s.sd.E(), {-1.0, 1.0}), JumpGenerator::original(s.sd, s.tr, t, x), o);
  I.solve();
  CHECK(I.diagnostics().linear_residual < 1e-10);
  for (cplx z : probes()) {
    const Mat2 ref = solve_trivial_region(s.sd, s.tr, t, x, at(z));
    CHECK(max_abs(I.M(z) - ref) < 1e-6);
  }
}

TEST_CASE("closed form below the light front") {
  BoxSetup s;
  const cplx z(0, 3);
  const PhaseField ph(s.tr, 1, 2);
  const Mat2 M = solve_trivial_region(s.sd, s.tr, 1, 2, at(z));
  CHECK(std::abs(M(0, 1) - s.sd.r(z) * std::exp(-2.0 * kI * ph.theta(at(z)))) < 1e-13);
  CHECK(M(1, 0) == 0.0);
  const Mat2 M0 = solve_trivial_region(s.sd, s.tr, 0, 0, at(z));
  CHECK(std::abs(M0(0, 1) - s.sd.r(z)) < 1e-14);
  CHECK_THROWS_AS(solve_trivial_region(s.sd, s.tr, 2, 1, at(z)), PreconditionError);
}

TEST_CASE("delta factor: jump, reflection, normalization, reference quadrature") {
  BoxSetup s;
  const double l1 = -5, l2 = 5;
  const DeltaFunction d(s.sd, l1, l2);
  // Boundary ratio on the right ray, sided and by vanishing offsets.
  const double lam = l2 + 1;
  const cplx ratio = d.value(at(cplx(lam, 0)), Side::Plus) / d.value(at(cplx(lam, 0)), Side::Minus);
  const double target = std::exp(d.log_jump(lam));
  CHECK(std::abs(ratio - target) < 1e-12);
  const cplx eps_ratio = d.value(cplx(lam, 1e-7)) / d.value(cplx(lam, -1e-7));
  CHECK(std::abs(eps_ratio - target) < 1e-6);
  // 1 - r^2 on the rays, r from the spectral module.
  const cplx r = s.sd.r(cplx(lam, 0));
  CHECK(std::abs(target - (1.0 - r * r)) < 1e-12);

  for (cplx z : probes()) {
    if (std::abs(z.imag()) < 0.1) continue;
    // Reflection: conj(delta(conj z)) * delta(z) = 1.
    CHECK(std::abs(std::conj(d.value(std::conj(z))) * d.value(z) - 1.0) < 1e-13);
    // Independent adaptive quadrature of the defining integral.
    auto f = [&](double s0) { return d.log_jump(s0); };
    auto kern = [&](double u, bool right) {
      const double s0 = right ? l2 + u / (1 - u) : l1 - u / (1 - u);
      const double ds = 1 / ((1 - u) * (1 - u));
      return f(s0) * ds / (s0 - z);
    };
    namespace bq = boost::math::quadrature;
    auto re = [&](bool right, bool real_part) {
      return bq::gauss_kronrod<double, 61>::integrate(
          [&](double u) {
            const cplx v = kern(u, right);
            return real_part ? v.real() : v.imag();
          },
          0.0, 1.0, 15, 1e-13);
    };
    const cplx right(re(true, true), re(true, false)), left(re(false, true), re(false, false));
    const cplx ref = std::exp((right + left) / (2.0 * kPi * kI));
    CHECK(std::abs(d.value(z) - ref) < 1e-9);
  }
  CHECK(std::abs(d.value(cplx(0, 1e4)) - 1.0) < 1e-3);
  CHECK_THROWS_AS(d.value(cplx(l2 + 2, 0)), PreconditionError);
  // A point just inside the junction whose rounded value sits on it.
  const LocalPoint inside{cplx(l2, 0), cplx(-1e-17, 0)};
  CHECK(inside.z() == cplx(l2, 0));
  CHECK(std::isfinite(std::abs(d.value(inside))));
}

TEST_CASE("scalar problem on the two rays reproduces the delta factor") {
  BoxSetup s;
  const double l1 = -5, l2 = 5;
  const DeltaFunction d(s.sd, l1, l2);
  Contour c;
  OrientedPiece right;
  right.kind = PieceKind::Ray;
  right.role = PieceRole::RayRight;
  right.start = l2;
  right.direction = 1.0;
  right.decays = true;
  OrientedPiece left = right;
  left.role = PieceRole::RayLeft;
  left.start = l1;
  left.direction = -1.0;
  left.inward = true;
  c.pieces = {left, right};
  auto jump = [&](PieceRole, const LocalPoint& z) {
    const double g = std::exp(d.log_jump(z.z().real()));
    return mat2(1.0 / g, 0.0, 0.0, g);
  };
  SolverOptions o;
  o.disc.nodes_per_piece = 64;
  RHInstance I(c, JumpGenerator::custom(jump), o);
  I.solve();
  for (cplx z : probes()) {
    const Mat2 M = I.M(z);
    CHECK(std::abs(M(0, 0) - d.value(z)) < 1e-6);
    CHECK(std::abs(M(1, 1) - 1.0 / d.value(z)) < 1e-6);
    CHECK(std::abs(M(0, 1)) < 1e-12);
  }
}

TEST_CASE("Cauchy rows: log antiderivative off a segment and Plemelj projection on R") {
  Contour c;
  OrientedPiece seg;
  seg.kind = PieceKind::Segment;
  seg.start = cplx(-1, 0.2);
  seg.end = cplx(2, -0.1);
  c.pieces = {seg};
  SolverOptions o;
  o.disc.nodes_per_piece = 24;
  RHInstance I(c, JumpGenerator::custom([](PieceRole, const LocalPoint&) { return Mat2::Identity(); }), o);
  std::vector<cplx> row;
  for (cplx z : {cplx(0.5, 0.7), cplx(0.5, 0.06), cplx(2.05, -0.1), cplx(-3, 0)}) {
    I.cauchy_row(at(z), -1, 1, 1, -1, row, nullptr);
    cplx sum = 0;
    for (cplx v : row) sum += v;
    const cplx ref = std::log((seg.end - z) / (seg.start - z)) / (2.0 * kPi * kI);
    CHECK(std::abs(sum - ref) < 1e-12);
  }

  // f(s) = 1/(s - z0) with z0 below R is the boundary value of a function
  // analytic and decaying above: C_+ f = f and C_- f = 0.
  o.disc.nodes_per_piece = 128;
  RHInstance R(build_sigma(cplx(0, 1)),
               JumpGenerator::custom([](PieceRole, const LocalPoint&) { return Mat2::Identity(); }), o);
  const cplx z0(0.3, -1.5);
  const auto& d = R.discretization();
  for (int k = 0; k < static_cast<int>(d.panels.size()); ++k) {
    if (d.panels[k].role != PieceRole::RealLine) continue;
    for (double tau : {-0.4, 0.35}) {
      const ContourPoint cp = R.at_tau(k, tau);
      std::vector<double> l;
      R.cauchy_row(R.point(cp), cp.panel, cp.p, cp.q, -1, row, &l);
      cplx pv = 0, interp = 0;
      for (int j = 0; j < d.size(); ++j)
        if (d.nodes[j].panel >= 0 && d.panels[d.nodes[j].panel].role == PieceRole::RealLine)
          pv += row[j] / (d.nodes[j].z - z0);
      const Panel& P = d.panels[k];
      for (int j = 0; j < P.count; ++j) interp += l[j] / (d.nodes[P.first + j].z - z0);
      const cplx f = 1.0 / (R.point(cp).z() - z0);
      CHECK(std::abs(interp - f) < 1e-10);
      CHECK(std::abs(pv + 0.5 * interp - f) < 1e-8);
      CHECK(std::abs(pv - 0.5 * interp) < 1e-8);
    }
  }
}

TEST_CASE("deformed solve: determinant, normalization, held-out jump residual") {
  BoxSetup s;
  RHSettings st;
  st.nodes_per_piece = 128;
  const RHSolution S = RHSolution::compute(s.sd, s.tr, 1.0, 0.5, st);
  REQUIRE_FALSE(S.trivial());
  CHECK(S.diagnostics().linear_residual < 1e-10);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> re(-8, 8), im(0.15, 3);
  for (int i = 0; i < 20; ++i) {
    const cplx z(re(rng), (i % 2 ? 1 : -1) * im(rng));
    CHECK(std::abs(S.M(z).determinant() - 1.0) < 1e-8);
  }
  CHECK(max_abs(S.M(1e4 * std::exp(kI * kPi / 3.0)) - Mat2::Identity()) < 1e-3);
  CHECK(held_out_jump_residual(*S.instance(), 1.0) < 1e-6);
  // Conjugation symmetry of the reconstructed M.
  for (cplx z : {cplx(0.4, 0.9), cplx(-3, 0.5), cplx(6, 2)}) {
    const Mat2 a = S.M(z), b = S.M(std::conj(z));
    CHECK(max_abs(sigma2() * b.conjugate() * sigma2() - a) < 1e-8);
  }
}

TEST_CASE("refinement lowers the jump residual") {
  ProfileSpec ps;
  ps.kind = ProfileKind::RaisedCosine;
  const BroadeningTransform tr(BroadeningProfile::make(ps));
  const ScatteringData sd(endpoint_from_boundary(1.0, 1.0, tr));
  double prev = 1e300;
  for (int n : {16, 32, 64}) {
    RHSettings st;
    st.nodes_per_piece = n;
    const RHSolution S = RHSolution::compute(sd, tr, 1.0, 0.5, st);
    const double r = held_out_jump_residual(*S.instance(), 1.0);
    MESSAGE("nodes/piece " << n << " residual " << r);
    CHECK((r < prev || r < 1e-12));
    prev = r;
  }
}
