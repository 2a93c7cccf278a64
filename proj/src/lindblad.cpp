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

#include "nanomech/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nanomech/csv.hpp"
#include "nanomech/errors.hpp"
#include "nanomech/ode.hpp"

namespace nanomech {

namespace {

constexpr Complex kI{0.0, 1.0};

// Every state reached by one decay of `channel` ('s' atom, 'a', 'b') must
// itself be a member.
void require_closed(const SpacePtr& space, char channel) {
    for (const auto& s : space->basis()) {
        BasisState down = s;
        int& n = channel == 's' ? down.atom_exc : channel == 'a' ? down.n_a : down.n_b;
        if (n == 0) continue;
        --n;
        if (!space->contains(down)) {
            throw ValidationError("space is not closed under decay: " + to_string(s) +
                                  " decays out of the basis; use truncated_space for "
                                  "dissipative runs");
        }
    }
}

}  // namespace

DensityMatrix::DensityMatrix(SpacePtr space, Matrix entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
    const auto dim = static_cast<Eigen::Index>(space_->dimension());
    if (entries_.rows() != dim || entries_.cols() != dim) {
        throw ValidationError("density matrix is " + std::to_string(entries_.rows()) + "x" +
                              std::to_string(entries_.cols()) + " but the space has dimension " +
                              std::to_string(dim));
    }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
    return {psi.space(), psi.amplitudes() * psi.amplitudes().adjoint()};
}

double DensityMatrix::min_eigenvalue() const {
    const Matrix herm = 0.5 * (entries_ + entries_.adjoint());
    return Eigen::SelfAdjointEigenSolver<Matrix>(herm, Eigen::EigenvaluesOnly)
        .eigenvalues()
        .minCoeff();
}

std::vector<double> DensityMatrix::populations() const {
    std::vector<double> p(dimension());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    }
    return p;
}

double DensityMatrix::population(const BasisState& s) const {
    const auto i = static_cast<Eigen::Index>(space_->index_of(s));
    return entries_(i, i).real();
}

double DensityMatrix::atom_excited_population() const {
    double p = 0.0;
    for (std::size_t i = 0; i < dimension(); ++i) {
        if (space_->state(i).atom_exc > 0) {
            p += entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
        }
    }
    return p;
}

void DensityMatrix::validate() const {
    if (hermiticity_error() > 1e-10) {
        throw ValidationError("density matrix is not Hermitian (error " +
                              std::to_string(hermiticity_error()) + ")");
    }
    if (std::abs(trace() - 1.0) > 1e-9) {
        throw ValidationError("density matrix trace is " + std::to_string(trace()));
    }
    if (min_eigenvalue() < -1e-8) {
        throw ValidationError("density matrix has eigenvalue " + std::to_string(min_eigenvalue()));
    }
}

MasterEquation::MasterEquation(const OperatorMatrix& H, const SystemParams& params, SpinMode mode)
    : space_(H.space()), minus_iH_(-kI * H.entries()) {
    params.validate();
    if (params.gamma_atom > 0.0) {
        const Matrix j_minus = collective_lowering(space_, params.N, mode).entries();
        require_closed(space_, 's');
        channels_.push_back({j_minus, j_minus.adjoint(), j_minus.adjoint() * j_minus,
                             params.gamma_atom});
    }
    if (params.cantilever_damping && params.gamma_cant > 0.0) {
        const Matrix a = annihilation_a(space_).entries();
        const Matrix b = annihilation_b(space_).entries();
        require_closed(space_, 'a');
        require_closed(space_, 'b');
        channels_.push_back({a, a.adjoint(), a.adjoint() * a, params.gamma_cant});
        channels_.push_back({b, b.adjoint(), b.adjoint() * b, params.gamma_cant});
    }
    // rho' = K rho + rho K^dagger + sum_c rate_c L rho L^dagger
    for (const auto& c : channels_) minus_iH_ -= 0.5 * c.rate * c.number;
}

void MasterEquation::apply(const Matrix& rho, Matrix& out) const {
    out.noalias() = minus_iH_ * rho;
    out.noalias() += rho * minus_iH_.adjoint();
    for (const auto& c : channels_) {
        out.noalias() += c.rate * (c.lowering * rho * c.lowering_dag);
    }
}

Matrix MasterEquation::apply(const Matrix& rho) const {
    Matrix out(rho.rows(), rho.cols());
    apply(rho, out);
    return out;
}

Matrix lindblad_rhs(const DensityMatrix& rho, const OperatorMatrix& H, const SystemParams& params,
                    SpinMode mode) {
    if (rho.dimension() != H.dimension()) {
        throw ValidationError("density matrix dimension " + std::to_string(rho.dimension()) +
                              " does not match Hamiltonian dimension " +
                              std::to_string(H.dimension()));
    }
    return MasterEquation(H, params, mode).apply(rho.entries());
}

void DensityTrajectory::validate() const {
    if (times.size() != rhos.size()) {
        throw ValidationError("trajectory has " + std::to_string(times.size()) + " times but " +
                              std::to_string(rhos.size()) + " density matrices");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw ValidationError("trajectory times must be strictly increasing");
        }
    }
}

void DensityTrajectory::write_csv(std::ostream& os, const SystemParams& params) const {
    validate();
    if (rhos.empty()) {
        os << "t\n";
        return;
    }
    const auto& space = rhos.front().space();
    std::vector<std::pair<int, Vector>> darks;
    for (int n = 0; n <= 3; ++n) {
        try {
            darks.emplace_back(n, dark_state(n, params.kappa_a, params.kappa_b, space).amplitudes());
        } catch (const CapacityError&) {
        }
    }
    os << 't';
    for (const auto& s : space->basis()) os << ",pop" << s;
    for (const auto& d : darks) os << ",dark_pop_" << d.first;
    os << '\n';
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto& rho = rhos[k].entries();
        os << format_number(times[k]);
        for (Eigen::Index i = 0; i < rho.rows(); ++i) os << ',' << format_number(rho(i, i).real());
        for (const auto& d : darks) {
            os << ',' << format_number((d.second.adjoint() * rho * d.second)(0, 0).real());
        }
        os << '\n';
    }
}

DensityTrajectory evolve_master(const DensityMatrix& rho0, const SystemParams& params,
                                std::span<const double> times, double tol, SpinMode mode,
                                Picture picture) {
    if (times.empty()) throw ValidationError("no sample times given");
    if (times.front() < 0.0) throw ValidationError("sample times must be nonnegative");
    rho0.validate();
    const MasterEquation eq(hamiltonian(params, rho0.space(), picture, mode), params, mode);

    IntegratorOptions opts;
    opts.rtol = tol;
    opts.atol = tol * 1e-3;
    DormandPrince<Matrix> stepper(
        [&eq](double, const Matrix& y, Matrix& dy) { eq.apply(y, dy); }, rho0.entries(), 0.0,
        opts);

    DensityTrajectory traj;
    traj.times.assign(times.begin(), times.end());
    traj.rhos.reserve(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (k > 0 && !(times[k] > times[k - 1])) {
            throw ValidationError("sample times must be strictly increasing");
        }
        stepper.advance_to(times[k]);
        DensityMatrix rho(rho0.space(), stepper.state());
        const double lowest = rho.min_eigenvalue();
        const double drift = std::abs(rho.trace() - 1.0);
        if (lowest < -1e-6 || drift > 1e-6) {
            std::ostringstream os;
            os << "master equation lost positivity or trace at t = " << times[k]
               << " (min eigenvalue " << lowest << ", trace drift " << drift << ", tol " << tol
               << ", " << stepper.stats().accepted << " steps)";
            throw IntegrationError(os.str());
        }
        traj.rhos.push_back(std::move(rho));
    }
    return traj;
}

SteadyStateResult steady_state(const DensityMatrix& rho0, const SystemParams& params,
                               double epsilon, double t_max, double tol, SpinMode mode,
                               Picture picture) {
    if (!(epsilon > 0.0)) throw ParameterError("epsilon must be > 0");
    rho0.validate();
    const MasterEquation eq(hamiltonian(params, rho0.space(), picture, mode), params, mode);
    const double rate = params.gamma_atom > 0.0
                            ? params.gamma_atom
                            : std::max({params.kappa_a, params.kappa_b, 1.0});
    const double threshold = epsilon * rate;

    auto residual = [&eq](const Matrix& rho) { return eq.apply(rho).norm(); };
    if (residual(rho0.entries()) < threshold) return {rho0, true, 0.0};

    const double fastest = std::max({params.N * params.gamma_atom, params.kappa_a,
                                     params.kappa_b, params.gamma_cant, 1e-300});
    const double chunk = 1.0 / fastest;

    IntegratorOptions opts;
    opts.rtol = tol;
    opts.atol = tol * 1e-3;
    DormandPrince<Matrix> stepper(
        [&eq](double, const Matrix& y, Matrix& dy) { eq.apply(y, dy); }, rho0.entries(), 0.0,
        opts);
    while (stepper.time() < t_max) {
        stepper.advance_to(std::min(t_max, stepper.time() + chunk));
        if (residual(stepper.state()) < threshold) {
            return {DensityMatrix(rho0.space(), stepper.state()), true, stepper.time()};
        }
    }
    return {DensityMatrix(rho0.space(), stepper.state()), false, stepper.time()};
}

DensityMatrix thermal_mixture(double n_bar, int cutoff, SpacePtr space) {
    if (!(n_bar >= 0.0)) throw ParameterError("n_bar must be >= 0");
    if (cutoff < 1) throw ParameterError("thermal cutoff must be >= 1");
    if (!space) space = truncated_space(1, cutoff);

    const double ratio = n_bar / (1.0 + n_bar);
    std::vector<double> p(static_cast<std::size_t>(cutoff) + 1);
    double sum = 0.0;
    for (int n = 0; n <= cutoff; ++n) {
        p[static_cast<std::size_t>(n)] = std::pow(ratio, n) / (1.0 + n_bar);
        sum += p[static_cast<std::size_t>(n)];
    }
    const auto dim = static_cast<Eigen::Index>(space->dimension());
    Matrix rho = Matrix::Zero(dim, dim);
    for (int n = 0; n <= cutoff; ++n) {
        const double w = p[static_cast<std::size_t>(n)] / sum;
        if (w == 0.0) continue;
        const BasisState s{0, n, 0};
        if (!space->contains(s)) {
            throw CapacityError("thermal state needs " + to_string(s) + " in the space");
        }
        const auto i = static_cast<Eigen::Index>(space->index_of(s));
        rho(i, i) = w;
    }
    return {space, std::move(rho)};
}

double dark_population(const DensityMatrix& rho, int n, const SystemParams& params) {
    const Vector d = dark_state(n, params.kappa_a, params.kappa_b, rho.space()).amplitudes();
    return (d.adjoint() * rho.entries() * d)(0, 0).real();
}

}  // namespace nanomech
