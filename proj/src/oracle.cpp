// SPDX-License-Identifier: MIT
#include "mbrh/oracle.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "mbrh/kernels.hpp"

namespace mbrh {

namespace {

// Grid index of a coordinate that must sit on the lattice k * delta.
int lattice_index(double v, double delta, int count, const char* what) {
  const double k = v / delta;
  const long r = std::lround(k);
  if (std::abs(k - static_cast<double>(r)) > 1e-9 * (1 + std::abs(k)) || r < 0 || r > count) {
    std::ostringstream os;
    os << "integrate_mb: output " << what << " = " << v << " is not a grid point";
    throw PreconditionError(os.str());
  }
  return static_cast<int>(r);
}

std::vector<int> output_indices(const std::vector<double>& req, int count, int stride, double delta,
                                const char* what, std::vector<double>& axis) {
  std::vector<int> idx;
  axis.clear();
  if (req.empty()) {
    for (int k = 0; k <= count; k += stride) idx.push_back(k);
  } else {
    for (double v : req) idx.push_back(lattice_index(v, delta, count, what));
  }
  for (int k : idx) axis.push_back(k * delta);
  return idx;
}

struct BlochState {
  std::vector<double> re, im, n;
  explicit BlochState(int nl) : re(nl, 0.0), im(nl, 0.0), n(nl, -1.0) {}
};

}  // namespace

FieldSolution integrate_mb(const SimGrid& sg, const BroadeningProfile& profile, double A0, double omega0) {
  if (!(sg.T > 0 && sg.L > 0)) throw PreconditionError("integrate_mb: T and L must be positive");
  if (sg.steps_per_unit < 1 || sg.lambda_nodes < 1 || sg.stride < 1)
    throw PreconditionError("integrate_mb: counts must be positive");
  const double delta = 1.0 / sg.steps_per_unit;
  const int nt = static_cast<int>(std::lround(sg.T * sg.steps_per_unit));
  const int nx = static_cast<int>(std::lround(sg.L * sg.steps_per_unit));

  FieldSolution out;
  out.grid = profile.grid(sg.lambda_nodes);
  const std::vector<int> ti = output_indices(sg.out_t, nt, sg.stride, delta, "t", out.t);
  const std::vector<int> xi = output_indices(sg.out_x, nx, sg.stride, delta, "x", out.x);
  out.allocate(sg.store_density);

  const int nl = out.grid.size();
  std::vector<double> wn(nl);
  for (int k = 0; k < nl; ++k) wn[k] = out.grid.weight[k] * out.grid.density[k];

  // Output rows per time index, and x positions of the output columns.
  std::vector<std::vector<int>> rows_at(nt + 1);
  for (int r = 0; r < static_cast<int>(ti.size()); ++r) rows_at[ti[r]].push_back(r);

  std::vector<BlochState> state(nx + 1, BlochState(nl));
  BlochState scratch(nl);
  std::vector<cplx> E(nx + 1, 0.0), S(nx + 1, 0.0), En(nx + 1, 0.0), Sn(nx + 1, 0.0);
  E[0] = A0;
  double drift = 0;

  auto record = [&](int k) {
    for (int r : rows_at[k])
      for (int c = 0; c < static_cast<int>(xi.size()); ++c) {
        const int j = xi[c];
        out.e(r, c) = E[j];
        if (!sg.store_density) continue;
        const BlochState& s = state[j];
        for (int q = 0; q < nl; ++q) {
          const cplx rho(s.re[q], s.im[q]);
          out.f(r, c, q) = mat2(s.n[q], rho, std::conj(rho), -s.n[q]);
        }
      }
  };
  record(0);

  // One Bloch step at column j with the interval-average field e_mid; the
  // result is left in scratch and the weighted polarization is returned.
  auto bloch_step = [&](int j, cplx e_mid) {
    const BlochState& s = state[j];
    kernels::BlochArrays a{out.grid.lambda.data(), wn.data(), s.re.data(), s.im.data(), s.n.data(),
                           scratch.re.data(), scratch.im.data(), scratch.n.data(), nl};
    return kernels::bloch(a, e_mid, delta);
  };

  for (int k = 0; k < nt; ++k) {
    const double t1 = (k + 1) * delta;
    const int front = std::min(k + 1, nx);  // columns beyond it stay at rest
    for (int j = 0; j <= front; ++j) {
      if (j == 0) {
        En[0] = A0 * std::exp(kI * omega0 * t1);
      }
      if (j > k) {
        // The light front reaches x_j at t_{k+1}: the medium has not yet seen
        // any field, so the state is unchanged and E is transported.
        Sn[j] = 0.0;
        En[j] = E[j - 1] + 0.5 * delta * S[j - 1];
        continue;
      }
      if (j == 0) {
        Sn[0] = bloch_step(0, 0.5 * (E[0] + En[0]));
      } else {
        // Trapezoidal source along the characteristic, solved by fixed point.
        cplx e_new = E[j - 1] + delta * S[j - 1];
        cplx s_new = 0;
        for (int it = 0; it < 50; ++it) {
          s_new = bloch_step(j, 0.5 * (E[j] + e_new));
          const cplx next = E[j - 1] + 0.5 * delta * (S[j - 1] + s_new);
          const double change = std::abs(next - e_new);
          e_new = next;
          if (change <= 1e-15 * (1 + std::abs(e_new))) break;
        }
        s_new = bloch_step(j, 0.5 * (E[j] + e_new));
        En[j] = e_new;
        Sn[j] = s_new;
      }
      if (!std::isfinite(En[j].real()) || !std::isfinite(En[j].imag()))
        throw NumericalError("integrate_mb: non-finite field");
      std::swap(state[j], scratch);
      const BlochState& s = state[j];
      for (int q = 0; q < nl; ++q)
        drift = std::max(drift, std::abs(s.n[q] * s.n[q] + s.re[q] * s.re[q] + s.im[q] * s.im[q] - 1.0));
    }
    for (int j = 0; j <= front; ++j) {
      E[j] = En[j];
      S[j] = Sn[j];
    }
    if (drift > sg.drift_limit) {
      std::ostringstream os;
      os << "integrate_mb: normalization drift " << drift << " at t = " << t1;
      throw NumericalError(os.str());
    }
    record(k + 1);
  }
  out.normalization_drift = drift;
  return out;
}

Discrepancy compare_fields(const FieldSolution& a, const FieldSolution& b,
                           const std::function<bool(double, double)>& region) {
  auto find = [](const std::vector<double>& axis, double v) {
    for (int i = 0; i < static_cast<int>(axis.size()); ++i)
      if (std::abs(axis[i] - v) <= 1e-9 * (1 + std::abs(v))) return i;
    return -1;
  };
  const bool same_lambda = !a.F.empty() && !b.F.empty() && a.grid.lambda == b.grid.lambda;
  Discrepancy d;
  double se = 0, sf = 0;
  int nf = 0;
  for (int i = 0; i < b.nt(); ++i)
    for (int j = 0; j < b.nx(); ++j) {
      const double t = b.t[i], x = b.x[j];
      if (!region(t, x)) continue;
      const cplx eb = b.e(i, j);
      if (!std::isfinite(eb.real()) || !std::isfinite(eb.imag())) continue;
      const int ia = find(a.t, t), ja = find(a.x, x);
      if (ia < 0 || ja < 0) {
        std::ostringstream os;
        os << "compare_fields: point (" << t << ", " << x << ") is not on the first grid";
        throw PreconditionError(os.str());
      }
      const cplx ea = a.e(ia, ja);
      const double e = std::abs(ea - eb);
      d.max_E = std::max(d.max_E, e);
      se += e * e;
      ++d.count;
      d.rows.push_back({t, x, ea, eb});
      if (!same_lambda) continue;
      for (int k = 0; k < b.nl(); ++k) {
        const Mat2 fb = b.f(i, j, k);
        if (!fb.allFinite()) continue;
        const double f = (a.f(ia, ja, k) - fb).cwiseAbs().maxCoeff();
        d.max_F = std::max(d.max_F, f);
        sf += f * f;
        ++nf;
      }
    }
  if (d.count == 0) throw PreconditionError("compare_fields: no common points in the region");
  d.rms_E = std::sqrt(se / d.count);
  if (same_lambda && nf > 0) {
    d.rms_F = std::sqrt(sf / nf);
  } else {
    d.max_F = d.rms_F = std::numeric_limits<double>::quiet_NaN();
  }
  return d;
}

}  // namespace mbrh
