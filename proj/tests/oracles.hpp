// Copyright 2026 The qaffect Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reference computations for the unit tests. Each one takes the textbook
// route (dense matrices, characteristic polynomials, explicit products) and
// shares no code with the library paths it checks.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Vec = std::vector<C>;

/// Row-major dense square matrix.
struct Mat {
  std::size_t n;
  std::vector<C> a;
  explicit Mat(std::size_t n_) : n(n_), a(n_ * n_, 0.0) {}
  C& operator()(std::size_t r, std::size_t c) { return a[r * n + c]; }
  C operator()(std::size_t r, std::size_t c) const { return a[r * n + c]; }
};

inline Mat matmul(const Mat& x, const Mat& y) {
  Mat out(x.n);
  for (std::size_t r = 0; r < x.n; ++r)
    for (std::size_t c = 0; c < x.n; ++c)
      for (std::size_t k = 0; k < x.n; ++k) out(r, c) += x(r, k) * y(k, c);
  return out;
}

inline Vec matvec(const Mat& m, const Vec& v) {
  Vec out(m.n, 0.0);
  for (std::size_t r = 0; r < m.n; ++r)
    for (std::size_t c = 0; c < m.n; ++c) out[r] += m(r, c) * v[c];
  return out;
}

inline C trace(const Mat& m) {
  C t = 0.0;
  for (std::size_t i = 0; i < m.n; ++i) t += m(i, i);
  return t;
}

inline Vec kron(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.n * b.n);
  for (std::size_t r1 = 0; r1 < a.n; ++r1)
    for (std::size_t c1 = 0; c1 < a.n; ++c1)
      for (std::size_t r2 = 0; r2 < b.n; ++r2)
        for (std::size_t c2 = 0; c2 < b.n; ++c2)
          out(r1 * b.n + r2, c1 * b.n + c2) = a(r1, c1) * b(r2, c2);
  return out;
}

inline Mat identity(std::size_t n) {
  Mat m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

inline Mat outer(const Vec& v) {
  Mat m(v.size());
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = v[r] * std::conj(v[c]);
  return m;
}

/// Full 2^n matrix of a gate acting on `targets`: entry (i, j) is the gate
/// element picked by the target bits, provided all other bits agree.
inline Mat embed(const Mat& gate, const std::vector<unsigned>& targets, unsigned n) {
  const std::size_t dim = std::size_t{1} << n;
  const auto local = [&](std::size_t idx) {
    std::size_t l = 0;
    for (unsigned t : targets) l = (l << 1) | ((idx >> (n - 1 - t)) & 1);
    return l;
  };
  std::size_t mask = 0;
  for (unsigned t : targets) mask |= std::size_t{1} << (n - 1 - t);
  Mat full(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if ((i & ~mask) == (j & ~mask)) full(i, j) = gate(local(i), local(j));
  return full;
}

/// Roots of lambda^2 - tr lambda + det for a 2x2 Hermitian matrix, larger first.
inline std::pair<double, double> eigenvalues2(const Mat& m) {
  const double tr = (m(0, 0) + m(1, 1)).real();
  const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

inline Mat pauli(char axis) {
  Mat p(2);
  if (axis == 'x') { p(0, 1) = 1.0; p(1, 0) = 1.0; }
  if (axis == 'y') { p(0, 1) = C(0, -1); p(1, 0) = C(0, 1); }
  if (axis == 'z') { p(0, 0) = 1.0; p(1, 1) = -1.0; }
  return p;
}

inline std::size_t popcount(std::size_t v) {
  std::size_t c = 0;
  for (; v; v >>= 1) c += v & 1;
  return c;
}

}  // namespace oracle
