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

#include "nanomech/operators.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "nanomech/errors.hpp"

namespace nanomech {

namespace {

// <k-1| J- |k> with M = k - J.
double dicke_lowering_element(int k, int N) {
    const double J = 0.5 * N;
    const double M = k - J;
    return std::sqrt(J * (J + 1.0) - M * (M - 1.0));
}

// <k+1| J+ |k> / sqrt(N) in the chosen representation.
double raising_over_sqrt_n(int k, int N, SpinMode mode) {
    if (mode == SpinMode::hp) return std::sqrt(k + 1.0);
    return dicke_lowering_element(k + 1, N) / std::sqrt(static_cast<double>(N));
}

void require_atom_cap(const HilbertSpace& space, int N) {
    if (N < 1) throw ParameterError("N must be >= 1, got " + std::to_string(N));
    if (space.atom_cap() > N) {
        throw ParameterError("atom_cap " + std::to_string(space.atom_cap()) +
                             " exceeds the atom count N = " + std::to_string(N));
    }
}

template <typename Shift, typename Element>
OperatorMatrix ladder(const SpacePtr& space, Shift shift, Element element) {
    const auto dim = static_cast<Eigen::Index>(space->dimension());
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        const auto& from = space->state(static_cast<std::size_t>(j));
        const auto to = shift(from);
        if (!to || !space->contains(*to)) continue;
        m(static_cast<Eigen::Index>(space->index_of(*to)), j) = element(from);
    }
    return OperatorMatrix(space, std::move(m));
}

}  // namespace

void SystemParams::validate() const {
    if (!(omega0 > 0.0)) throw ParameterError("params.omega0 must be > 0");
    if (!(kappa_a >= 0.0)) throw ParameterError("params.kappa_a must be >= 0");
    if (!(kappa_b >= 0.0)) throw ParameterError("params.kappa_b must be >= 0");
    if (N < 1) throw ParameterError("params.N must be >= 1");
    if (!(gamma_atom >= 0.0)) throw ParameterError("params.gamma_atom must be >= 0");
    if (!(gamma_cant >= 0.0)) throw ParameterError("params.gamma_cant must be >= 0");
}

std::string_view to_string(SpinMode m) { return m == SpinMode::hp ? "hp" : "exact"; }
std::string_view to_string(Picture p) { return p == Picture::lab ? "lab" : "interaction"; }

SpinMode parse_spin_mode(std::string_view s) {
    if (s == "exact") return SpinMode::exact;
    if (s == "hp") return SpinMode::hp;
    throw ParameterError("mode must be \"exact\" or \"hp\", got \"" + std::string(s) + "\"");
}

Picture parse_picture(std::string_view s) {
    if (s == "lab") return Picture::lab;
    if (s == "interaction") return Picture::interaction;
    throw ParameterError("picture must be \"lab\" or \"interaction\", got \"" + std::string(s) +
                         "\"");
}

OperatorMatrix::OperatorMatrix(SpacePtr space, Matrix entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
    const auto dim = static_cast<Eigen::Index>(space_->dimension());
    if (entries_.rows() != dim || entries_.cols() != dim) {
        throw ValidationError("operator matrix is " + std::to_string(entries_.rows()) + "x" +
                              std::to_string(entries_.cols()) + " but the space has dimension " +
                              std::to_string(dim));
    }
}

OperatorMatrix OperatorMatrix::adjoint() const { return {space_, entries_.adjoint()}; }

bool OperatorMatrix::is_hermitian(double rel_tol) const {
    return (entries_ - entries_.adjoint()).norm() <= rel_tol * entries_.norm();
}

void OperatorMatrix::write_csv(std::ostream& os) const {
    os << "row,col,re,im\n";
    char buf[96];
    for (Eigen::Index c = 0; c < entries_.cols(); ++c) {
        for (Eigen::Index r = 0; r < entries_.rows(); ++r) {
            const Complex v = entries_(r, c);
            if (v == Complex(0.0, 0.0)) continue;
            std::snprintf(buf, sizeof buf, "%ld,%ld,%.12g,%.12g\n", static_cast<long>(r),
                          static_cast<long>(c), v.real(), v.imag());
            os << buf;
        }
    }
}

OperatorMatrix annihilation_a(const SpacePtr& space) {
    return ladder(
        space,
        [](const BasisState& s) -> std::optional<BasisState> {
            if (s.n_a == 0) return std::nullopt;
            return BasisState{s.atom_exc, s.n_a - 1, s.n_b};
        },
        [](const BasisState& s) { return std::sqrt(static_cast<double>(s.n_a)); });
}

OperatorMatrix annihilation_b(const SpacePtr& space) {
    return ladder(
        space,
        [](const BasisState& s) -> std::optional<BasisState> {
            if (s.n_b == 0) return std::nullopt;
            return BasisState{s.atom_exc, s.n_a, s.n_b - 1};
        },
        [](const BasisState& s) { return std::sqrt(static_cast<double>(s.n_b)); });
}

OperatorMatrix dicke_lowering(const SpacePtr& space, int N) {
    require_atom_cap(*space, N);
    return ladder(
        space,
        [](const BasisState& s) -> std::optional<BasisState> {
            if (s.atom_exc == 0) return std::nullopt;
            return BasisState{s.atom_exc - 1, s.n_a, s.n_b};
        },
        [N](const BasisState& s) { return dicke_lowering_element(s.atom_exc, N); });
}

OperatorMatrix dicke_raising(const SpacePtr& space, int N) {
    return dicke_lowering(space, N).adjoint();
}

OperatorMatrix hp_lowering(const SpacePtr& space) {
    return ladder(
        space,
        [](const BasisState& s) -> std::optional<BasisState> {
            if (s.atom_exc == 0) return std::nullopt;
            return BasisState{s.atom_exc - 1, s.n_a, s.n_b};
        },
        [](const BasisState& s) { return std::sqrt(static_cast<double>(s.atom_exc)); });
}

OperatorMatrix collective_lowering(const SpacePtr& space, int N, SpinMode mode) {
    if (mode == SpinMode::exact) return dicke_lowering(space, N);
    if (N < 1) throw ParameterError("N must be >= 1, got " + std::to_string(N));
    auto c = hp_lowering(space);
    return {space, c.entries() * std::sqrt(static_cast<double>(N))};
}

OperatorMatrix total_number(const SpacePtr& space) {
    const auto dim = static_cast<Eigen::Index>(space->dimension());
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        m(i, i) = space->state(static_cast<std::size_t>(i)).total_excitations();
    }
    return {space, std::move(m)};
}

OperatorMatrix hamiltonian(const SystemParams& params, const SpacePtr& space, Picture picture,
                           SpinMode mode) {
    params.validate();
    if (mode == SpinMode::exact) require_atom_cap(*space, params.N);

    const auto dim = static_cast<Eigen::Index>(space->dimension());
    Matrix h = Matrix::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        const auto& s = space->state(static_cast<std::size_t>(j));
        if (picture == Picture::lab) h(j, j) = params.omega0 * s.total_excitations();

        // kappa_x * x J+/sqrt(N): one vibron moves from cantilever x into the gas.
        const double up = raising_over_sqrt_n(s.atom_exc, params.N, mode);
        if (s.n_a > 0) {
            const BasisState to{s.atom_exc + 1, s.n_a - 1, s.n_b};
            if (space->contains(to)) {
                const auto i = static_cast<Eigen::Index>(space->index_of(to));
                const double v = params.kappa_a * std::sqrt(static_cast<double>(s.n_a)) * up;
                h(i, j) += v;
                h(j, i) += v;
            }
        }
        if (s.n_b > 0) {
            const BasisState to{s.atom_exc + 1, s.n_a, s.n_b - 1};
            if (space->contains(to)) {
                const auto i = static_cast<Eigen::Index>(space->index_of(to));
                const double v = params.kappa_b * std::sqrt(static_cast<double>(s.n_b)) * up;
                h(i, j) += v;
                h(j, i) += v;
            }
        }
    }
    return {space, std::move(h)};
}

NormalModeFrequencies normal_mode_frequencies(const SystemParams& params) {
    if (params.kappa_a != params.kappa_b) {
        throw UnsupportedError("normal-mode closed form needs kappa_a == kappa_b");
    }
    const double split = std::sqrt(2.0) * params.kappa_a;
    return {params.omega0 + split, params.omega0 - split, params.omega0};
}

}  // namespace nanomech
