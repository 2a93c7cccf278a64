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

#include "nanomech/operators.hpp"

namespace nanomech {

/// Pure state over a space.
class StateVector {
   public:
    StateVector(SpacePtr space, Vector amplitudes);

    /// Unit vector on a single basis state.
    static StateVector basis(const SpacePtr& space, const BasisState& s);

    const SpacePtr& space() const { return space_; }
    const Vector& amplitudes() const { return amplitudes_; }
    std::size_t dimension() const { return space_->dimension(); }

    Complex amplitude(const BasisState& s) const;
    double norm() const { return amplitudes_.norm(); }
    std::vector<double> populations() const;

    /// Copy into another space by basis label. Throws CapacityError if a
    /// state carrying weight above `drop_tol` has no counterpart there.
    StateVector embed(const SpacePtr& target, double drop_tol = 0.0) const;

   private:
    SpacePtr space_;
    Vector amplitudes_;
};

/// Sampled pure-state evolution.
struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::map<std::string, std::string> meta;

    /// Throws ValidationError if times are not strictly increasing or the
    /// sample counts disagree.
    void validate() const;

    /// `t,re(s0),im(s0),re(s1),im(s1),...,pop(s0),pop(s1),...`
    void write_csv(std::ostream& os) const;
};

/// Integrate i d(psi)/dt = H psi with the adaptive Runge-Kutta stepper and
/// record psi at each sample time (t = 0 is the start; times must be
/// strictly increasing and nonnegative).
///
/// Throws ValidationError for a non-Hermitian H or unnormalised psi0 and
/// IntegrationError if the step size underflows or the norm drifts by more
/// than 1e-9.
Trajectory evolve_schrodinger(const OperatorMatrix& H, const StateVector& psi0,
                              std::span<const double> times, double tol = 1e-9);

enum class OneExcitationStart { g10, e00 };

/// Closed-form one-excitation evolution for kappa_a = kappa_b = kappa in
/// the interaction picture. The result lives on manifold_space(1, 1), whose
/// lexicographic order is (|g,0,1>, |g,1,0>, |e,0,0>).
StateVector analytic_one_excitation(double kappa, double t, OneExcitationStart initial);

/// (a^dagger(t))^n |g,0,0>, normalised, with a^dagger(t) expanded over the
/// normal modes p+, p-, q of the linearised Holstein-Primakoff Hamiltonian.
/// In the interaction picture omega0 is removed from every mode frequency.
///
/// The state is returned on `space` (default manifold_space(n, n)); a space
/// that cannot hold it raises CapacityError.
StateVector heisenberg_state(int n, double t, const SystemParams& params,
                             Picture picture = Picture::interaction, SpacePtr space = nullptr);

/// n-fold excitation of the dark mode q^dagger ~ kappa_a b^dagger - kappa_b a^dagger,
/// normalised, with the first nonzero amplitude (basis order) made real and
/// positive. For n = 1 this is (kappa_a |g,0,1> - kappa_b |g,1,0>) / norm.
StateVector dark_state(int n, double kappa_a, double kappa_b, const SpacePtr& space);

/// Probability of k dark-mode quanta, k = 0..K, where K is the largest
/// cantilever excitation carried by psi0. Entries sum to 1.
std::vector<double> dark_weight_distribution(const StateVector& psi0, const SystemParams& params);

/// Same marginal for a density matrix over `space`: sum_s tr(P_k rho_ss).
std::vector<double> dark_weight_distribution(const Matrix& rho, const SpacePtr& space,
                                             const SystemParams& params);

}  // namespace nanomech
