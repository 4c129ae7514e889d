// SPDX-License-Identifier: MIT
#include <atomic>
#include <cstdlib>
#include <cstring>

#include "mbrh/kernels.hpp"

namespace mbrh::kernels {

namespace {

bool env_forces_scalar() {
  const char* v = std::getenv("MBRH_FORCE_SCALAR");
  return v && std::strcmp(v, "0") != 0 && v[0] != '\0';
}

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return avx2::compiled() && __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<int> forced{-1};  // -1: unset, 0/1: explicit

bool use_avx2() {
  const int f = forced.load(std::memory_order_relaxed);
  if (f == 1) return false;
  if (f == -1 && env_forces_scalar()) return false;
  static const bool has = cpu_has_avx2();
  return has;
}

}  // namespace

void cauchy(const NodeArrays& a, cplx za, cplx zo, double* outr, double* outi) {
  if (use_avx2())
    avx2::cauchy(a, za.real(), za.imag(), zo.real(), zo.imag(), outr, outi);
  else
    scalar::cauchy(a, za.real(), za.imag(), zo.real(), zo.imag(), outr, outi);
}

cplx bloch(const BlochArrays& a, cplx E, double dt) {
  return use_avx2() ? avx2::bloch(a, E.real(), E.imag(), dt) : scalar::bloch(a, E.real(), E.imag(), dt);
}

const char* active_variant() { return use_avx2() ? "avx2" : "scalar"; }

void force_scalar(bool on) { forced.store(on ? 1 : 0, std::memory_order_relaxed); }

}  // namespace mbrh::kernels
