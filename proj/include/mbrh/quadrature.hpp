// Gauss-Legendre rules, barycentric interpolation and endpoint grading maps.
// SPDX-License-Identifier: MIT
#pragma once

#include <memory>
#include <vector>

namespace mbrh {

// Gauss-Legendre rule on [-1, 1], nodes ascending. onepx/onemx hold 1+x and
// 1-x computed in extended precision so that clustered nodes keep their
// relative accuracy near the ends.
struct GaussRule {
  std::vector<double> x, w, onepx, onemx;
  std::vector<double> bary;  // barycentric weights for the node set
  int size() const { return static_cast<int>(x.size()); }
};

// Cached, thread-safe. n >= 1.
const GaussRule& gauss_legendre(int n);

// Differentiation matrix (row-major n*n) of the interpolant through the
// rule's nodes.
std::vector<double> differentiation_matrix(const GaussRule& rule);

// Lagrange basis values l_j(t) at an arbitrary t in [-1, 1].
std::vector<double> lagrange_weights(const GaussRule& rule, double t);

// Maps a rule on [-1,1] to [a,b]; returns nodes and weights.
void affine_rule(const GaussRule& rule, double a, double b, std::vector<double>& x,
                 std::vector<double>& w);

// Endpoint grading by the symmetric incomplete beta map: near a graded end
// 1+u behaves like (1+tau)^p. Start/End use the left half of that map
// stretched over [-1,1], so the opposite end stays ungraded.
enum class Grading { None, Start, End, Both };

struct GradedPoint {
  double u;       // base parameter
  double p;       // 1 + u, accurate near u = -1
  double q;       // 1 - u, accurate near u = +1
  double dudtau;  // derivative of the map
};

GradedPoint grade(Grading g, double exponent, double tau, double onep_tau, double onem_tau);

// Inverse of the grading map: tau such that grade(tau).u == u.
double ungrade(Grading g, double exponent, double u);

// Same inverse from p = 1+u and q = 1-u, keeping 1+tau and 1-tau accurate
// near the ends.
struct UngradedPoint {
  double tau, onep, onem;
};
UngradedPoint ungrade_local(Grading g, double exponent, double p, double q);

}  // namespace mbrh
