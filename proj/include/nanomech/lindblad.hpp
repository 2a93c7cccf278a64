// Copyright 2026 The nanomech Authors
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

#pragma once

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "nanomech/dynamics.hpp"
#include "nanomech/operators.hpp"

namespace nanomech {

class DensityMatrix {
   public:
    /// No invariant checks; call validate() where they matter.
    DensityMatrix(SpacePtr space, Matrix entries);

    static DensityMatrix pure(const StateVector& psi);

    const SpacePtr& space() const { return space_; }
    const Matrix& entries() const { return entries_; }
    std::size_t dimension() const { return space_->dimension(); }

    double trace() const { return entries_.trace().real(); }
    double min_eigenvalue() const;
    double hermiticity_error() const { return (entries_ - entries_.adjoint()).norm(); }
    std::vector<double> populations() const;
    double population(const BasisState& s) const;
    /// Total weight on basis states with atom_exc > 0.
    double atom_excited_population() const;

    /// Hermitian to 1e-10, trace 1 +- 1e-9, min eigenvalue >= -1e-8.
    /// Throws ValidationError describing the first violation.
    void validate() const;

   private:
    SpacePtr space_;
    Matrix entries_;
};

/// Generator of the master equation
///   d(rho)/dt = -i[H, rho] + (Gamma/2)(2 J- rho J+ - J+J- rho - rho J+J-)
/// with J- in the chosen spin representation (N enters through its matrix
/// elements, so the excited-state decay rate of one collective excitation is
/// N * Gamma). With params.cantilever_damping set, gamma_cant * D[a] and
/// gamma_cant * D[b] are added (extension; off by default).
class MasterEquation {
   public:
    MasterEquation(const OperatorMatrix& H, const SystemParams& params,
                   SpinMode mode = SpinMode::exact);

    const SpacePtr& space() const { return space_; }

    /// out = L(rho); out must not alias rho.
    void apply(const Matrix& rho, Matrix& out) const;
    Matrix apply(const Matrix& rho) const;

   private:
    struct Channel {
        Matrix lowering;
        Matrix lowering_dag;
        Matrix number;  // L^dagger L
        double rate;
    };

    SpacePtr space_;
    Matrix minus_iH_;
    std::vector<Channel> channels_;
};

/// One evaluation of the master-equation right-hand side.
Matrix lindblad_rhs(const DensityMatrix& rho, const OperatorMatrix& H, const SystemParams& params,
                    SpinMode mode = SpinMode::exact);

struct DensityTrajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> rhos;
    std::map<std::string, std::string> meta;

    void validate() const;

    /// `t,pop(s0),...,dark_pop_0,...` with dark columns for every n <= 3
    /// whose dark state fits in the space.
    void write_csv(std::ostream& os, const SystemParams& params) const;
};

/// Integrate the master equation from rho0 and record rho at the sample
/// times (strictly increasing, nonnegative; integration starts at t = 0).
///
/// The Hamiltonian is built from params on rho0's space. The space must be
/// closed under every active decay channel (use truncated_space), otherwise
/// ValidationError. A sampled state with an eigenvalue below -1e-6 or trace
/// drift above 1e-6 raises IntegrationError.
DensityTrajectory evolve_master(const DensityMatrix& rho0, const SystemParams& params,
                                std::span<const double> times, double tol = 1e-9,
                                SpinMode mode = SpinMode::exact,
                                Picture picture = Picture::interaction);

struct SteadyStateResult {
    DensityMatrix rho;
    bool converged;
    double t_reached;
};

/// Integrate until ||L(rho)||_F < epsilon * Gamma or t_max. Gamma is
/// params.gamma_atom, or max(kappa_a, kappa_b, 1) when there is no atomic decay.
SteadyStateResult steady_state(const DensityMatrix& rho0, const SystemParams& params,
                               double epsilon, double t_max, double tol = 1e-9,
                               SpinMode mode = SpinMode::exact,
                               Picture picture = Picture::interaction);

/// Cantilever a thermal (truncated at `cutoff`, renormalised), cantilever b
/// and the gas in their ground states. Default space truncated_space(1, cutoff).
DensityMatrix thermal_mixture(double n_bar, int cutoff, SpacePtr space = nullptr);

/// <D_n| rho |D_n> for the dark state of params' couplings.
double dark_population(const DensityMatrix& rho, int n, const SystemParams& params);

}  // namespace nanomech
