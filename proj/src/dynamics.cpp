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

#include "nanomech/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "nanomech/csv.hpp"
#include "nanomech/errors.hpp"
#include "nanomech/ode.hpp"

namespace nanomech {

namespace {

constexpr Complex kI{0.0, 1.0};

Matrix creation(const OperatorMatrix& lowering) { return lowering.entries().adjoint(); }

// op^n |vacuum> on a space containing the vacuum.
Vector apply_power(const SpacePtr& space, const Matrix& op, int n) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space->dimension()));
    v(static_cast<Eigen::Index>(space->index_of({0, 0, 0}))) = 1.0;
    for (int i = 0; i < n; ++i) v = op * v;
    return v;
}

void fix_global_phase(Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > 1e-12) {
            v *= std::conj(v(i)) / std::abs(v(i));
            v(i) = std::abs(v(i));
            return;
        }
    }
}

}  // namespace

StateVector::StateVector(SpacePtr space, Vector amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != static_cast<Eigen::Index>(space_->dimension())) {
        throw ValidationError("state has " + std::to_string(amplitudes_.size()) +
                              " amplitudes but the space has dimension " +
                              std::to_string(space_->dimension()));
    }
}

StateVector StateVector::basis(const SpacePtr& space, const BasisState& s) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space->dimension()));
    v(static_cast<Eigen::Index>(space->index_of(s))) = 1.0;
    return {space, std::move(v)};
}

Complex StateVector::amplitude(const BasisState& s) const {
    return amplitudes_(static_cast<Eigen::Index>(space_->index_of(s)));
}

std::vector<double> StateVector::populations() const {
    std::vector<double> p(static_cast<std::size_t>(amplitudes_.size()));
    for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
        p[static_cast<std::size_t>(i)] = std::norm(amplitudes_(i));
    }
    return p;
}

StateVector StateVector::embed(const SpacePtr& target, double drop_tol) const {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(target->dimension()));
    for (std::size_t i = 0; i < space_->dimension(); ++i) {
        const Complex v = amplitudes_(static_cast<Eigen::Index>(i));
        const auto& s = space_->state(i);
        if (target->contains(s)) {
            out(static_cast<Eigen::Index>(target->index_of(s))) = v;
        } else if (std::abs(v) > drop_tol) {
            throw CapacityError("state " + to_string(s) + " carries weight but is outside the "
                                "target space");
        }
    }
    return {target, std::move(out)};
}

void Trajectory::validate() const {
    if (times.size() != states.size()) {
        throw ValidationError("trajectory has " + std::to_string(times.size()) + " times but " +
                              std::to_string(states.size()) + " states");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw ValidationError("trajectory times must be strictly increasing");
        }
    }
}

void Trajectory::write_csv(std::ostream& os) const {
    validate();
    if (states.empty()) {
        os << "t\n";
        return;
    }
    const auto& space = *states.front().space();
    os << 't';
    for (const auto& s : space.basis()) {
        os << ",re" << s << ",im" << s;
    }
    for (const auto& s : space.basis()) os << ",pop" << s;
    os << '\n';
    for (std::size_t k = 0; k < times.size(); ++k) {
        os << format_number(times[k]);
        const auto& amps = states[k].amplitudes();
        for (Eigen::Index i = 0; i < amps.size(); ++i) {
            os << ',' << format_number(amps(i).real()) << ',' << format_number(amps(i).imag());
        }
        for (Eigen::Index i = 0; i < amps.size(); ++i) {
            os << ',' << format_number(std::norm(amps(i)));
        }
        os << '\n';
    }
}

Trajectory evolve_schrodinger(const OperatorMatrix& H, const StateVector& psi0,
                              std::span<const double> times, double tol) {
    if (H.space() != psi0.space() && H.space()->basis() != psi0.space()->basis()) {
        throw ValidationError("Hamiltonian and initial state live on different spaces");
    }
    if (!H.is_hermitian(1e-12)) throw ValidationError("Hamiltonian is not Hermitian");
    if (std::abs(psi0.norm() - 1.0) > 1e-9) {
        throw ValidationError("initial state is not normalised (norm " +
                              std::to_string(psi0.norm()) + ")");
    }
    if (times.empty()) throw ValidationError("no sample times given");
    if (times.front() < 0.0) throw ValidationError("sample times must be nonnegative");

    const Matrix minus_iH = -kI * H.entries();
    IntegratorOptions opts;
    opts.rtol = tol;
    opts.atol = tol * 1e-3;
    DormandPrince<Vector> stepper(
        [&minus_iH](double, const Vector& y, Vector& dy) { dy.noalias() = minus_iH * y; },
        psi0.amplitudes(), 0.0, opts);

    Trajectory traj;
    traj.times.assign(times.begin(), times.end());
    traj.states.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (k > 0 && !(times[k] > times[k - 1])) {
            throw ValidationError("sample times must be strictly increasing");
        }
        stepper.advance_to(times[k]);
        const double drift = std::abs(stepper.state().norm() - 1.0);
        if (drift > 1e-9) {
            throw IntegrationError("norm drifted by " + std::to_string(drift) + " at t = " +
                                   std::to_string(times[k]) + "; tighten the tolerance (tol = " +
                                   std::to_string(tol) + ")");
        }
        traj.states.emplace_back(psi0.space(), stepper.state());
    }
    return traj;
}

StateVector analytic_one_excitation(double kappa, double t, OneExcitationStart initial) {
    const auto space = manifold_space(1, 1);
    const double theta = std::numbers::sqrt2 * kappa * t;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Vector v(3);
    const auto g01 = static_cast<Eigen::Index>(space->index_of({0, 0, 1}));
    const auto g10 = static_cast<Eigen::Index>(space->index_of({0, 1, 0}));
    const auto e00 = static_cast<Eigen::Index>(space->index_of({1, 0, 0}));
    if (initial == OneExcitationStart::g10) {
        v(g10) = 0.5 * (1.0 + c);
        v(g01) = 0.5 * (c - 1.0);
        v(e00) = -kI * (s / std::numbers::sqrt2);
    } else {
        v(g10) = -kI * (s / std::numbers::sqrt2);
        v(g01) = -kI * (s / std::numbers::sqrt2);
        v(e00) = c;
    }
    return {space, std::move(v)};
}

StateVector heisenberg_state(int n, double t, const SystemParams& params, Picture picture,
                             SpacePtr space) {
    if (n < 0) throw ParameterError("excitation number must be nonnegative");
    params.validate();
    const auto freq = normal_mode_frequencies(params);
    const double shift = picture == Picture::interaction ? params.omega0 : 0.0;

    const auto work = truncated_space(n, n);
    const Matrix a_dag = creation(annihilation_a(work));
    const Matrix b_dag = creation(annihilation_b(work));
    const Matrix c_dag = creation(hp_lowering(work));

    const Matrix p_plus = 0.5 * (a_dag + b_dag) + c_dag / std::numbers::sqrt2;
    const Matrix p_minus = 0.5 * (a_dag + b_dag) - c_dag / std::numbers::sqrt2;
    const Matrix q = (a_dag - b_dag) / std::numbers::sqrt2;

    const Complex e_plus = std::exp(kI * ((freq.omega_plus - shift) * t));
    const Complex e_minus = std::exp(kI * ((freq.omega_minus - shift) * t));
    const Complex e_q = std::exp(kI * ((freq.omega_q - shift) * t));
    const Matrix a_dag_t = 0.5 * (e_plus * p_plus + e_minus * p_minus + std::numbers::sqrt2 * e_q * q);

    Vector v = apply_power(work, a_dag_t, n);
    v /= v.norm();

    if (!space) space = manifold_space(n, n);
    try {
        return StateVector(work, std::move(v)).embed(space, 1e-14);
    } catch (const CapacityError&) {
        throw CapacityError("heisenberg_state: " + std::to_string(n) +
                            " excitations do not fit in the requested space");
    }
}

StateVector dark_state(int n, double kappa_a, double kappa_b, const SpacePtr& space) {
    if (n < 0) throw ParameterError("excitation number must be nonnegative");
    const double norm = std::hypot(kappa_a, kappa_b);
    if (norm == 0.0) throw ParameterError("dark mode is undefined when both couplings vanish");

    const auto work = truncated_space(0, n);
    const Matrix q = (kappa_a * creation(annihilation_b(work)) -
                      kappa_b * creation(annihilation_a(work))) / norm;
    Vector v = apply_power(work, q, n);
    v /= v.norm();

    StateVector out = [&] {
        try {
            return StateVector(work, std::move(v)).embed(space, 1e-14);
        } catch (const CapacityError&) {
            throw CapacityError("dark_state: " + std::to_string(n) +
                                " dark excitations do not fit in the requested space");
        }
    }();
    Vector amps = out.amplitudes();
    fix_global_phase(amps);
    return {space, std::move(amps)};
}

std::vector<double> dark_weight_distribution(const Matrix& rho, const SpacePtr& space,
                                             const SystemParams& params) {
    const double norm = std::hypot(params.kappa_a, params.kappa_b);
    if (norm == 0.0) throw ParameterError("dark mode is undefined when both couplings vanish");
    const auto dim = static_cast<Eigen::Index>(space->dimension());
    if (rho.rows() != dim || rho.cols() != dim) {
        throw ValidationError("density matrix does not match the space dimension");
    }

    // highest cantilever excitation with weight
    int top = 0;
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (std::abs(rho(i, i)) > 1e-15) {
            const auto& s = space->state(static_cast<std::size_t>(i));
            top = std::max(top, s.n_a + s.n_b);
        }
    }

    // q^dagger q on the cantilever factor; it conserves n_a + n_b, so the
    // truncation n_a + n_b <= top is exact.
    const auto cant = truncated_space(0, top);
    const Matrix a = annihilation_a(cant).entries();
    const Matrix b = annihilation_b(cant).entries();
    const Matrix q = (params.kappa_a * b - params.kappa_b * a) / norm;
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(q.adjoint() * q);

    std::vector<double> weights(static_cast<std::size_t>(top) + 1, 0.0);
    const auto cdim = static_cast<Eigen::Index>(cant->dimension());
    for (int level = 0; level <= space->atom_cap(); ++level) {
        // rho restricted to atom_exc == level, expressed on the cantilever basis
        std::vector<std::pair<Eigen::Index, Eigen::Index>> map;  // (space index, cant index)
        for (Eigen::Index i = 0; i < dim; ++i) {
            const auto& s = space->state(static_cast<std::size_t>(i));
            if (s.atom_exc != level || s.n_a + s.n_b > top) continue;
            map.emplace_back(i, static_cast<Eigen::Index>(cant->index_of({0, s.n_a, s.n_b})));
        }
        if (map.empty()) continue;
        Matrix block = Matrix::Zero(cdim, cdim);
        for (const auto& [i, ci] : map) {
            for (const auto& [j, cj] : map) block(ci, cj) = rho(i, j);
        }
        for (Eigen::Index k = 0; k < cdim; ++k) {
            const auto occ = static_cast<long>(std::lround(eig.eigenvalues()(k)));
            const auto& v = eig.eigenvectors().col(k);
            weights[static_cast<std::size_t>(occ)] += (v.adjoint() * block * v)(0, 0).real();
        }
    }
    return weights;
}

std::vector<double> dark_weight_distribution(const StateVector& psi0, const SystemParams& params) {
    const Matrix rho = psi0.amplitudes() * psi0.amplitudes().adjoint();
    return dark_weight_distribution(rho, psi0.space(), params);
}

}  // namespace nanomech
