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

#include <Eigen/Dense>
#include <complex>
#include <ostream>
#include <string_view>

#include "nanomech/hilbert.hpp"

namespace nanomech {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Model rates. Any consistent unit works; the figure configs use kappa = 1.
///
/// The couplings kappa_a, kappa_b already contain the collective sqrt(N)
/// enhancement, so a single excitation hops between a cantilever and the gas
/// at exactly kappa in both spin representations. Readers who take kappa as
/// a per-atom coupling must rescale all rates by sqrt(N).
struct SystemParams {
    double omega0 = 1.0;
    double kappa_a = 1.0;
    double kappa_b = 1.0;
    int N = 100;
    double gamma_atom = 0.0;  // single-spin decay rate; collective rate is N * gamma_atom
    double gamma_cant = 0.0;  // only used when cantilever_damping is set
    bool cantilever_damping = false;

    /// Throws ParameterError naming the offending field.
    void validate() const;
};

/// Representation of the collective spin.
enum class SpinMode {
    exact,  // Dicke ladder elements sqrt(J(J+1) - M(M-1)), J = N/2
    hp,     // linearised Holstein-Primakoff boson: J- ~ sqrt(N) c
};

enum class Picture {
    lab,          // includes omega0 * (atom + a'a + b'b)
    interaction,  // resonant coupling only
};

std::string_view to_string(SpinMode m);
std::string_view to_string(Picture p);
SpinMode parse_spin_mode(std::string_view s);
Picture parse_picture(std::string_view s);

/// Dense operator tied to the basis ordering of a space.
class OperatorMatrix {
   public:
    OperatorMatrix(SpacePtr space, Matrix entries);

    const SpacePtr& space() const { return space_; }
    const Matrix& entries() const { return entries_; }
    std::size_t dimension() const { return space_->dimension(); }

    OperatorMatrix adjoint() const;

    /// ||A - A^dagger|| <= rel_tol * ||A|| (Frobenius).
    bool is_hermitian(double rel_tol = 1e-12) const;

    /// Nonzero entries as `row,col,re,im`.
    void write_csv(std::ostream& os) const;

   private:
    SpacePtr space_;
    Matrix entries_;
};

OperatorMatrix annihilation_a(const SpacePtr& space);
OperatorMatrix annihilation_b(const SpacePtr& space);

/// Collective lowering J- in the Dicke basis. Requires atom_cap <= N.
OperatorMatrix dicke_lowering(const SpacePtr& space, int N);
OperatorMatrix dicke_raising(const SpacePtr& space, int N);

/// Bosonic lowering c on the atomic factor (element sqrt(k) for k -> k-1).
OperatorMatrix hp_lowering(const SpacePtr& space);

/// J- in the selected representation: dicke_lowering or sqrt(N) * c.
OperatorMatrix collective_lowering(const SpacePtr& space, int N, SpinMode mode);

/// Diagonal operator counting atom_exc + n_a + n_b.
OperatorMatrix total_number(const SpacePtr& space);

/// H / hbar = [omega0 * N_tot] + kappa_a (a J+ / sqrt(N) + h.c.) + kappa_b (b J+ / sqrt(N) + h.c.)
///
/// The constant -N/2 of J_z is dropped. Matrix elements are assembled
/// directly rather than by operator products, so the result is exact on
/// manifold spaces where intermediate states fall outside the basis.
OperatorMatrix hamiltonian(const SystemParams& params, const SpacePtr& space,
                           Picture picture = Picture::interaction,
                           SpinMode mode = SpinMode::exact);

struct NormalModeFrequencies {
    double omega_plus;
    double omega_minus;
    double omega_q;
};

/// (omega0 + sqrt2 kappa, omega0 - sqrt2 kappa, omega0). Symmetric coupling
/// only; throws UnsupportedError otherwise.
NormalModeFrequencies normal_mode_frequencies(const SystemParams& params);

}  // namespace nanomech
