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

#include <ostream>
#include <utility>
#include <vector>

#include "nanomech/dynamics.hpp"
#include "nanomech/lindblad.hpp"

namespace nanomech {

/// Cantilever a (x) cantilever b density matrix, index (l, m) -> l * d_b + m.
struct BipartiteState {
    int d_a = 1;
    int d_b = 1;
    Matrix rho;

    void validate() const;
    double purity() const { return (rho * rho).trace().real(); }
};

enum class Subsystem { a, b };

/// Trace out the gas. The reduced state is embedded in the product space
/// with d_a = cap_a + 1 and d_b = cap_b + 1 of the source space, so manifold
/// spaces are handled without special cases.
BipartiteState partial_trace_atom(const DensityMatrix& rho);
BipartiteState partial_trace_atom(const StateVector& psi);

/// Reduced state of one cantilever.
Matrix reduced_state(const BipartiteState& bp, Subsystem keep);

/// Transpose on one factor: (rho^{T_b})_{(l,m),(l',m')} = rho_{(l,m'),(l',m)}.
Matrix partial_transpose(const BipartiteState& bp, Subsystem which);

/// Sum of |negative eigenvalues| of the partial transpose; eigenvalues above
/// -1e-12 count as zero.
double negativity(const BipartiteState& bp, Subsystem which = Subsystem::b);

using NegativitySeries = std::vector<std::pair<double, double>>;

NegativitySeries negativity_trajectory(const Trajectory& traj);
NegativitySeries negativity_trajectory(const DensityTrajectory& traj);

/// `t,negativity`
void write_negativity_csv(std::ostream& os, const NegativitySeries& series);

/// Squared singular values of an amplitude matrix (row l = |l>_a, column
/// m = |m>_b), normalised and sorted descending. Zeros are dropped.
std::vector<double> schmidt_decomposition(const Matrix& amplitudes);

/// Same for a pure BipartiteState; purity below 1 - 1e-8 raises ValidationError.
std::vector<double> schmidt_decomposition(const BipartiteState& bp);

/// zeta = 1 / sum p_i^2 over the Schmidt probabilities.
double participation_ratio(const Matrix& amplitudes);
double participation_ratio(const BipartiteState& bp);

/// Cantilever amplitude matrix of a state with no weight on excited gas
/// levels; throws ValidationError otherwise.
Matrix cantilever_amplitudes(const StateVector& psi);

}  // namespace nanomech
