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

#include "dqdsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dqdsim/errors.hpp"

namespace dqdsim {

double ghz_to_uev(double frequency_ghz) {
  return PhysicalConstants::planck_h_per_ghz * frequency_ghz;
}

double uev_to_ghz(double energy_uev) {
  return energy_uev / PhysicalConstants::planck_h_per_ghz;
}

void QubitPairParams::validate() const {
  if (!(delta_u > 0.0)) throw ValidationError("delta_u", "must be > 0");
  if (!(delta_l > 0.0)) throw ValidationError("delta_l", "must be > 0");
  if (!(j_coupling >= 0.0)) throw ValidationError("j_coupling", "must be >= 0");
  if (!std::isfinite(eps_u0)) throw ValidationError("eps_u0", "must be finite");
  if (!std::isfinite(eps_l0)) throw ValidationError("eps_l0", "must be finite");
  if (!(temperature > 0.0)) throw ValidationError("temperature", "must be > 0");
}

bool in_strong_coupling_regime(const QubitPairParams& params, double ratio) {
  const double delta = std::max(params.delta_u, params.delta_l);
  const double eps = std::min(std::abs(params.eps_u0), std::abs(params.eps_l0));
  return eps >= ratio * params.j_coupling &&
         params.j_coupling >= ratio * delta;
}

Hamiltonian4 build_hamiltonian(const QubitPairParams& params, double eps_u,
                               double eps_l) {
  const double du = 0.5 * params.delta_u;
  const double dl = 0.5 * params.delta_l;
  Matrix4 h = Matrix4::Zero();
  h(0, 0) = 0.5 * (eps_u + eps_l);
  h(1, 1) = 0.5 * (eps_u - eps_l);
  h(2, 2) = 0.5 * (-eps_u + eps_l);
  h(3, 3) = 0.5 * (-eps_u - eps_l) + params.j_coupling;
  // upper flips: |0l> <-> |1l>
  h(0, 2) = h(2, 0) = du;
  h(1, 3) = h(3, 1) = du;
  // lower flips: |u0> <-> |u1>
  h(0, 1) = h(1, 0) = dl;
  h(2, 3) = h(3, 2) = dl;
  return Hamiltonian4(h);
}

EigenDecomposition eigen_symmetric(const Hamiltonian4& h) {
  Eigen::SelfAdjointEigenSolver<Matrix4> solver(h.entries());
  return {solver.eigenvalues(), solver.eigenvectors()};
}

DensityMatrix DensityMatrix::basis_state(int b) {
  ComplexMatrix4 m = ComplexMatrix4::Zero();
  m(b, b) = 1.0;
  return DensityMatrix(m);
}

bool DensityMatrix::is_valid() const {
  if (!entries_.allFinite()) return false;
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    return false;
  }
  if (std::abs(trace() - 1.0) > 1e-9) return false;
  for (int i = 0; i < 4; ++i) {
    const double p = entries_(i, i).real();
    if (p < -1e-9 || p > 1.0 + 1e-9) return false;
  }
  return true;
}

void DensityMatrix::validate() const {
  if (!is_valid()) {
    throw StateInvalid(
        "density matrix must be Hermitian with unit trace and populations "
        "in [0, 1]");
  }
}

RealStateMatrix to_real_form(const DensityMatrix& rho) {
  return RealStateMatrix(rho.entries().real() + rho.entries().imag());
}

DensityMatrix from_real_form(const RealStateMatrix& w) {
  const Matrix4& m = w.entries();
  const Matrix4 re = 0.5 * (m + m.transpose());
  const Matrix4 im = 0.5 * (m - m.transpose());
  ComplexMatrix4 rho;
  rho.real() = re;
  rho.imag() = im;
  return DensityMatrix(rho);
}

std::array<double, 4> populations(const DensityMatrix& rho) {
  return {rho(0, 0).real(), rho(1, 1).real(), rho(2, 2).real(),
          rho(3, 3).real()};
}

std::array<double, 4> populations(const RealStateMatrix& w) {
  return {w(0, 0), w(1, 1), w(2, 2), w(3, 3)};
}

std::array<double, 4> averaged_populations(const RealStateMatrix& w,
                                           const QubitPairParams& params,
                                           double eps_u, double eps_l) {
  const EigenDecomposition eig =
      eigen_symmetric(build_hamiltonian(params, eps_u, eps_l));
  const Matrix4 re = 0.5 * (w.entries() + w.entries().transpose());
  const Matrix4 rotated = eig.vectors.transpose() * re * eig.vectors;
  // Near-degenerate pairs (for example |01> and |10> at equal baselines)
  // precess far slower than the charge splittings and stay coherent.
  constexpr double kSlowGap = 5.0;  // ueV
  Matrix4 kept = Matrix4::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (std::abs(eig.values(i) - eig.values(j)) < kSlowGap) kept(i, j) = rotated(i, j);
    }
  }
  const Matrix4 back = eig.vectors * kept * eig.vectors.transpose();
  return {back(0, 0), back(1, 1), back(2, 2), back(3, 3)};
}

namespace {

ProbabilityPair from_populations(const std::array<double, 4>& p) {
  // upper |0>: b = 0, 1; lower |0>: b = 0, 2
  return {p[0] + p[1], p[0] + p[2]};
}

}  // namespace

ProbabilityPair probabilities(const DensityMatrix& rho) {
  return from_populations(populations(rho));
}

ProbabilityPair probabilities(const RealStateMatrix& w) {
  return from_populations(populations(w));
}

DensityMatrix thermal_initial_state(const QubitPairParams& params,
                                    double eps_u, double eps_l) {
  if (!(params.temperature > 0.0)) {
    throw ValidationError("temperature", "must be > 0");
  }
  const EigenDecomposition eig =
      eigen_symmetric(build_hamiltonian(params, eps_u, eps_l));

  std::array<int, 4> owner{};  // basis state -> eigenvector
  std::array<bool, 4> taken{};
  for (int b = 0; b < 4; ++b) {
    int best = 0;
    double best_overlap = -1.0;
    double second = -1.0;
    for (int i = 0; i < 4; ++i) {
      const double overlap = eig.vectors(b, i) * eig.vectors(b, i);
      if (overlap > best_overlap) {
        second = best_overlap;
        best_overlap = overlap;
        best = i;
      } else if (overlap > second) {
        second = overlap;
      }
    }
    if (best_overlap - second < 1e-6 || taken[best]) {
      throw OverlapAmbiguity("basis state " + std::to_string(b) +
                             " has no unique eigenvector; initialize "
                             "further from a balance point");
    }
    taken[best] = true;
    owner[b] = best;
  }

  const double kt = PhysicalConstants::k_boltzmann * params.temperature;
  const double e_min = eig.values(0);
  std::array<double, 4> weight{};
  double z = 0.0;
  for (int b = 0; b < 4; ++b) {
    weight[b] = std::exp(-(eig.values(owner[b]) - e_min) / kt);
    z += weight[b];
  }
  ComplexMatrix4 rho = ComplexMatrix4::Zero();
  for (int b = 0; b < 4; ++b) rho(b, b) = weight[b] / z;
  return DensityMatrix(rho);
}

}  // namespace dqdsim
