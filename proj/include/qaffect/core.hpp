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

// Small dense state algebra for desk-scale registers: pure states, density
// matrices, and Bloch-ball geometry.

#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qaffect {

using Amp = std::complex<double>;

/// Raised for every domain violation (bad ranges, broken invariants,
/// malformed input files).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr unsigned kMaxQubits = 8;

namespace tol {
inline constexpr double kConstruct = 1e-9;
inline constexpr double kDerived = 1e-8;
inline constexpr double kPurityLength = 1e-6;
}  // namespace tol

inline bool is_finite(Amp a) {
  return std::isfinite(a.real()) && std::isfinite(a.imag());
}

/// Normalized amplitude vector over `n_qubits` qubits. Index bits are read
/// left to right: qubit 0 is the most significant bit, so |10> is index 2.
class PureState {
 public:
  PureState(unsigned n_qubits, std::vector<Amp> amplitudes)
      : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_qubits_ == 0 || n_qubits_ > kMaxQubits) {
      throw Error("qubit count must be in [1, " + std::to_string(kMaxQubits) +
                  "], got " + std::to_string(n_qubits_));
    }
    if (amps_.size() != (std::size_t{1} << n_qubits_)) {
      throw Error("amplitude vector length " + std::to_string(amps_.size()) +
                  " does not match 2^" + std::to_string(n_qubits_));
    }
    double norm2 = 0.0;
    for (const Amp& a : amps_) {
      if (!is_finite(a)) throw Error("non-finite amplitude");
      norm2 += std::norm(a);
    }
    if (std::abs(norm2 - 1.0) > tol::kConstruct) {
      throw Error("state is not normalized (norm^2 = " +
                  std::to_string(norm2) + ")");
    }
  }

  /// Rescales a non-zero vector to unit norm before validating.
  static PureState normalized(unsigned n_qubits, std::vector<Amp> amplitudes) {
    double norm2 = 0.0;
    for (const Amp& a : amplitudes) norm2 += std::norm(a);
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
      throw Error("cannot normalize a zero or non-finite vector");
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (Amp& a : amplitudes) a *= scale;
    return PureState(n_qubits, std::move(amplitudes));
  }

  unsigned n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const Amp> amplitudes() const { return amps_; }
  Amp operator[](std::size_t i) const { return amps_.at(i); }

  // Single-qubit accessors for the |0> and |1> coefficients.
  Amp alpha() const { return single().amps_[0]; }
  Amp beta() const { return single().amps_[1]; }

  PureState with_global_phase(double gamma) const {
    std::vector<Amp> out(amps_);
    const Amp phase = std::polar(1.0, gamma);
    for (Amp& a : out) a *= phase;
    return PureState(n_qubits_, std::move(out));
  }

  bool operator==(const PureState&) const = default;

 private:
  const PureState& single() const {
    if (n_qubits_ != 1) throw Error("expected a single-qubit state");
    return *this;
  }

  unsigned n_qubits_;
  std::vector<Amp> amps_;
};

struct EnsembleMember {
  double weight;
  PureState state;
};

/// Weighted collection of pure states with non-negative weights summing to 1.
class Ensemble {
 public:
  explicit Ensemble(std::vector<EnsembleMember> members)
      : members_(std::move(members)) {
    if (members_.empty()) throw Error("ensemble must have at least one member");
    double total = 0.0;
    for (const auto& m : members_) {
      if (!std::isfinite(m.weight) || m.weight < 0.0 || m.weight > 1.0) {
        throw Error("ensemble weight outside [0, 1]");
      }
      if (m.state.n_qubits() != members_.front().state.n_qubits()) {
        throw Error("ensemble members have different qubit counts");
      }
      total += m.weight;
    }
    if (std::abs(total - 1.0) > tol::kConstruct) {
      throw Error("ensemble weights sum to " + std::to_string(total) +
                  ", expected 1");
    }
  }

  std::span<const EnsembleMember> members() const { return members_; }
  unsigned n_qubits() const { return members_.front().state.n_qubits(); }

 private:
  std::vector<EnsembleMember> members_;
};

class DensityMatrix;
namespace detail {
inline void check_spectrum(const DensityMatrix& rho);
}

/// Hermitian, unit-trace, positive semidefinite operator (row-major storage).
class DensityMatrix {
 public:
  DensityMatrix(std::size_t dim, std::vector<Amp> entries)
      : dim_(dim), entries_(std::move(entries)) {
    if (dim_ < 2 || dim_ > (std::size_t{1} << kMaxQubits) ||
        (dim_ & (dim_ - 1)) != 0) {
      throw Error("density matrix dimension must be a power of two in [2, " +
                  std::to_string(std::size_t{1} << kMaxQubits) + "]");
    }
    if (entries_.size() != dim_ * dim_) {
      throw Error("density matrix entry count does not match dim^2");
    }
    Amp trace = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t c = 0; c < dim_; ++c) {
        const Amp v = (*this)(r, c);
        if (!is_finite(v)) throw Error("non-finite density matrix entry");
        if (std::abs(v - std::conj((*this)(c, r))) > tol::kConstruct) {
          throw Error("density matrix is not Hermitian");
        }
      }
      trace += (*this)(r, r);
    }
    if (std::abs(trace - 1.0) > tol::kConstruct) {
      throw Error("density matrix trace is " + std::to_string(trace.real()) +
                  ", expected 1");
    }
    detail::check_spectrum(*this);
  }

  /// I / dim over `n_qubits` qubits: the completely depolarized state.
  static DensityMatrix maximally_mixed(unsigned n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    std::vector<Amp> e(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0 / double(dim);
    return DensityMatrix(dim, std::move(e));
  }

  std::size_t dim() const { return dim_; }
  Amp operator()(std::size_t r, std::size_t c) const {
    return entries_[r * dim_ + c];
  }
  std::span<const Amp> entries() const { return entries_; }

 private:
  std::size_t dim_;
  std::vector<Amp> entries_;
};

/// Point in the closed unit ball. Length 1 marks a pure state, 0 the
/// completely depolarized one.
class BlochVector {
 public:
  BlochVector(double x, double y, double z) : x_(x), y_(y), z_(z) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
      throw Error("non-finite Bloch coordinate");
    }
    if (length() > 1.0 + tol::kConstruct) {
      throw Error("Bloch vector lies outside the unit ball");
    }
  }

  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  double length() const { return std::sqrt(x_ * x_ + y_ * y_ + z_ * z_); }

  /// Polar angle in [0, pi]; 0 at the origin.
  double theta() const {
    const double r = length();
    if (r == 0.0) return 0.0;
    return std::acos(std::clamp(z_ / r, -1.0, 1.0));
  }

  /// Azimuth in [0, 2pi). Reported as 0 on the z axis, where it is undefined.
  double phi() const {
    if (std::hypot(x_, y_) < 1e-12) return 0.0;
    double p = std::atan2(y_, x_);
    if (p < 0.0) p += 2.0 * std::numbers::pi;
    if (p >= 2.0 * std::numbers::pi) p = 0.0;
    return p;
  }

  bool operator==(const BlochVector&) const = default;

 private:
  double x_, y_, z_;
};

// ---------------------------------------------------------------------------
// Constructors

inline PureState basis_state(unsigned n_qubits, std::size_t index) {
  if (n_qubits == 0 || n_qubits > kMaxQubits) {
    throw Error("qubit count out of range");
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (index >= dim) {
    throw Error("basis index " + std::to_string(index) + " out of range for " +
                std::to_string(n_qubits) + " qubit(s)");
  }
  std::vector<Amp> amps(dim, 0.0);
  amps[index] = 1.0;
  return PureState(n_qubits, std::move(amps));
}

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>, theta in [0, pi], phi in
/// [0, 2pi).
inline PureState pure_from_angles(double theta, double phi) {
  constexpr double pi = std::numbers::pi;
  if (!(theta >= 0.0 && theta <= pi)) {
    throw Error("theta must lie in [0, pi]");
  }
  if (!(phi >= 0.0 && phi < 2.0 * pi)) {
    throw Error("phi must lie in [0, 2pi)");
  }
  return PureState(1, {Amp(std::cos(theta / 2.0), 0.0),
                       std::polar(std::sin(theta / 2.0), phi)});
}

/// <bra_of|ket>, conjugating the left argument.
inline Amp inner_product(const PureState& bra_of, const PureState& ket) {
  if (bra_of.n_qubits() != ket.n_qubits()) {
    throw Error("inner product of states with different qubit counts");
  }
  Amp acc = 0.0;
  for (std::size_t i = 0; i < ket.dim(); ++i) {
    acc += std::conj(bra_of[i]) * ket[i];
  }
  return acc;
}

/// Kronecker product; `a` supplies the most significant qubits.
inline PureState tensor(const PureState& a, const PureState& b) {
  const unsigned n = a.n_qubits() + b.n_qubits();
  if (n > kMaxQubits) {
    throw Error("combined register of " + std::to_string(n) +
                " qubits exceeds the cap of " + std::to_string(kMaxQubits));
  }
  std::vector<Amp> out;
  out.reserve(a.dim() * b.dim());
  for (const Amp& ai : a.amplitudes()) {
    for (const Amp& bj : b.amplitudes()) out.push_back(ai * bj);
  }
  return PureState(n, std::move(out));
}

// ---------------------------------------------------------------------------
// Density matrices

inline DensityMatrix density_from_pure(const PureState& state) {
  const std::size_t dim = state.dim();
  std::vector<Amp> e(dim * dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      e[r * dim + c] = state[r] * std::conj(state[c]);
    }
  }
  return DensityMatrix(dim, std::move(e));
}

/// sum_k p_k |psi_k><psi_k|
inline DensityMatrix mix(const Ensemble& ensemble) {
  const std::size_t dim = std::size_t{1} << ensemble.n_qubits();
  std::vector<Amp> e(dim * dim, 0.0);
  for (const auto& [weight, state] : ensemble.members()) {
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t c = 0; c < dim; ++c) {
        e[r * dim + c] += weight * state[r] * std::conj(state[c]);
      }
    }
  }
  return DensityMatrix(dim, std::move(e));
}

/// Tr(rho^2). Uses Hermiticity: Tr(rho rho) = sum |rho_ij|^2.
inline double purity(const DensityMatrix& rho) {
  double acc = 0.0;
  for (const Amp& v : rho.entries()) acc += std::norm(v);
  return acc;
}

inline Amp trace(const DensityMatrix& rho) {
  Amp acc = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i) acc += rho(i, i);
  return acc;
}

/// Single-qubit state of `qubit` after tracing out the rest of the register.
inline DensityMatrix reduced_density(const PureState& state, unsigned qubit) {
  const unsigned n = state.n_qubits();
  if (qubit >= n) throw Error("qubit index out of range");
  const std::size_t bit = std::size_t{1} << (n - 1 - qubit);
  std::array<Amp, 4> e{};
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (i & bit) continue;
    const Amp a0 = state[i];
    const Amp a1 = state[i | bit];
    e[0] += a0 * std::conj(a0);
    e[1] += a0 * std::conj(a1);
    e[2] += a1 * std::conj(a0);
    e[3] += a1 * std::conj(a1);
  }
  return DensityMatrix(2, {e.begin(), e.end()});
}

struct Eigen2 {
  std::array<double, 2> values;  // descending
  std::array<PureState, 2> vectors;
};

/// Closed-form spectral decomposition of a 2x2 density matrix.
inline Eigen2 eigen2(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw Error("eigen2 requires a 2x2 density matrix");
  const double a = rho(0, 0).real();
  const double d = rho(1, 1).real();
  const Amp b = rho(0, 1);
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), std::abs(b));
  const double hi = mean + radius;
  const double lo = mean - radius;

  std::array<Amp, 2> v;
  if (std::abs(b) < 1e-15) {
    v = a >= d ? std::array<Amp, 2>{1.0, 0.0} : std::array<Amp, 2>{0.0, 1.0};
  } else {
    // Either row of (rho - hi) annihilates v; take the better-conditioned one.
    const std::array<Amp, 2> from_row0{b, hi - a};
    const std::array<Amp, 2> from_row1{hi - d, std::conj(b)};
    const auto norm = [](const std::array<Amp, 2>& u) {
      return std::hypot(std::abs(u[0]), std::abs(u[1]));
    };
    v = norm(from_row0) >= norm(from_row1) ? from_row0 : from_row1;
  }
  PureState top = PureState::normalized(1, {v[0], v[1]});
  PureState bottom(1, {-std::conj(top[1]), std::conj(top[0])});
  return Eigen2{{hi, lo}, {std::move(top), std::move(bottom)}};
}

namespace detail {
inline void check_spectrum(const DensityMatrix& rho) {
  double smallest;
  if (rho.dim() == 2) {
    const double a = rho(0, 0).real();
    const double d = rho(1, 1).real();
    smallest = 0.5 * (a + d) - std::hypot(0.5 * (a - d), std::abs(rho(0, 1)));
  } else {
    const auto n = static_cast<Eigen::Index>(rho.dim());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) {
        m(r, c) = rho(std::size_t(r), std::size_t(c));
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        m, Eigen::EigenvaluesOnly);
    smallest = solver.eigenvalues().minCoeff();
  }
  if (smallest < -tol::kConstruct) {
    throw Error("density matrix has a negative eigenvalue");
  }
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Bloch geometry

/// (2 Re(a* b), 2 Im(a* b), |a|^2 - |b|^2) for a|0> + b|1>.
inline BlochVector bloch_from_pure(const PureState& state) {
  if (state.n_qubits() != 1) {
    throw Error("Bloch coordinates need a single-qubit state");
  }
  const Amp cross = std::conj(state.alpha()) * state.beta();
  const double z = std::norm(state.alpha()) - std::norm(state.beta());
  return BlochVector(2.0 * cross.real(), 2.0 * cross.imag(), z);
}

/// (Tr(rho X), Tr(rho Y), Tr(rho Z)) with the Pauli matrices.
inline BlochVector bloch_from_density(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw Error("Bloch coordinates need a 2x2 density matrix");
  }
  using namespace std::complex_literals;
  const std::array<Amp, 4> px{0.0, 1.0, 1.0, 0.0};
  const std::array<Amp, 4> py{0.0, -1i, 1i, 0.0};
  const std::array<Amp, 4> pz{1.0, 0.0, 0.0, -1.0};
  const auto tr_with = [&](const std::array<Amp, 4>& p) {
    // Tr(rho P) = sum_rc rho_rc P_cr
    Amp acc = 0.0;
    for (std::size_t r = 0; r < 2; ++r) {
      for (std::size_t c = 0; c < 2; ++c) acc += rho(r, c) * p[c * 2 + r];
    }
    return acc.real();
  };
  return BlochVector(tr_with(px), tr_with(py), tr_with(pz));
}

}  // namespace qaffect
