// Copyright 2026 The dqdsim Authors
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

// Two coupled double-quantum-dot charge qubits: constants, parameters,
// the 4x4 Hamiltonian, thermal initialization and population readout.
//
// Units throughout: energies in ueV, times in ps, temperatures in K.
// Basis index b = 2*u + l for upper bit u and lower bit l, i.e. the order
// |00>, |01>, |10>, |11>. State |0> of each qubit is the low-energy charge
// configuration at negative detuning.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace dqdsim {

using Matrix4 = Eigen::Matrix4d;
using ComplexMatrix4 = Eigen::Matrix4cd;
using Complex = std::complex<double>;

struct PhysicalConstants {
  static constexpr double hbar = 658.2119569;             // ueV ps
  static constexpr double planck_h = 4135.667696;         // ueV ps
  static constexpr double planck_h_per_ghz = 4.135667696; // ueV / GHz
  static constexpr double k_boltzmann = 86.17333262;      // ueV / K
};

double ghz_to_uev(double frequency_ghz);
double uev_to_ghz(double energy_uev);

// Defaults are the reference device: 6.2 GHz, 6.0 GHz, J = 119 ueV,
// baselines -200 ueV, 10 mK.
struct QubitPairParams {
  double delta_u = 6.2 * PhysicalConstants::planck_h_per_ghz;  // 2 t_U
  double delta_l = 6.0 * PhysicalConstants::planck_h_per_ghz;  // 2 t_L
  double j_coupling = 119.0;  // energy shift of |11>
  double eps_u0 = -200.0;    // baseline detunings
  double eps_l0 = -200.0;
  double temperature = 0.010;

  // Throws ValidationError naming the offending field.
  void validate() const;
};

// True when |eps| >= ratio * J and J >= ratio * delta for both qubits,
// the regime where the charge basis is a good computational basis.
bool in_strong_coupling_regime(const QubitPairParams& params,
                               double ratio = 3.0);

class Hamiltonian4 {
 public:
  Hamiltonian4() : entries_(Matrix4::Zero()) {}
  explicit Hamiltonian4(const Matrix4& entries) : entries_(entries) {}

  const Matrix4& entries() const noexcept { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

 private:
  Matrix4 entries_;
};

Hamiltonian4 build_hamiltonian(const QubitPairParams& params, double eps_u,
                               double eps_l);

struct EigenDecomposition {
  Eigen::Vector4d values;  // ascending
  Matrix4 vectors;         // column i pairs with values(i)
};

EigenDecomposition eigen_symmetric(const Hamiltonian4& h);

class DensityMatrix {
 public:
  DensityMatrix() : entries_(ComplexMatrix4::Zero()) {}
  explicit DensityMatrix(const ComplexMatrix4& entries) : entries_(entries) {}

  // Pure charge state |b><b|.
  static DensityMatrix basis_state(int b);

  const ComplexMatrix4& entries() const noexcept { return entries_; }
  Complex operator()(int i, int j) const { return entries_(i, j); }

  double trace() const { return entries_.trace().real(); }
  double purity() const { return (entries_ * entries_).trace().real(); }

  // Hermitian within 1e-10, unit trace within 1e-9, populations within
  // [-1e-9, 1 + 1e-9]. validate() throws StateInvalid.
  bool is_valid() const;
  void validate() const;

 private:
  ComplexMatrix4 entries_;
};

// W = Re(rho) + Im(rho).
class RealStateMatrix {
 public:
  RealStateMatrix() : entries_(Matrix4::Zero()) {}
  explicit RealStateMatrix(const Matrix4& entries) : entries_(entries) {}

  const Matrix4& entries() const noexcept { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }
  double trace() const { return entries_.trace(); }

 private:
  Matrix4 entries_;
};

RealStateMatrix to_real_form(const DensityMatrix& rho);
DensityMatrix from_real_form(const RealStateMatrix& w);

struct ProbabilityPair {
  double p_u0 = 1.0;
  double p_l0 = 1.0;
};

ProbabilityPair probabilities(const DensityMatrix& rho);
ProbabilityPair probabilities(const RealStateMatrix& w);

// Charge-basis populations, index 2u + l.
std::array<double, 4> populations(const DensityMatrix& rho);
std::array<double, 4> populations(const RealStateMatrix& w);

// Charge populations averaged over the free precession at (eps_u, eps_l):
// coherences between distinct eigenstates of H(eps_u, eps_l) are dropped
// before reading the charge diagonal.
std::array<double, 4> averaged_populations(const RealStateMatrix& w,
                                           const QubitPairParams& params,
                                           double eps_u, double eps_l);

// Boltzmann-weighted, charge-diagonal state at the given detunings. Each
// eigenvalue is assigned to the basis state its eigenvector overlaps most.
// Throws OverlapAmbiguity when that assignment is not unique.
DensityMatrix thermal_initial_state(const QubitPairParams& params,
                                    double eps_u, double eps_l);

}  // namespace dqdsim
