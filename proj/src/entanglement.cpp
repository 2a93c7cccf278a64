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

#include "nanomech/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "nanomech/csv.hpp"
#include "nanomech/errors.hpp"

namespace nanomech {

namespace {

constexpr double kNegativeEigenvalue = -1e-12;

Eigen::Index pair_index(int l, int m, int d_b) { return static_cast<Eigen::Index>(l * d_b + m); }

std::vector<double> probabilities_from(std::vector<double> p) {
    double sum = 0.0;
    for (double v : p) sum += v;
    for (double& v : p) v /= sum;
    std::sort(p.begin(), p.end(), std::greater<>());
    while (!p.empty() && p.back() < 1e-14) p.pop_back();
    return p;
}

}  // namespace

void BipartiteState::validate() const {
    if (d_a < 1 || d_b < 1 || rho.rows() != d_a * d_b || rho.cols() != d_a * d_b) {
        throw ValidationError("bipartite dimensions do not match the density matrix");
    }
}

BipartiteState partial_trace_atom(const DensityMatrix& rho) {
    const auto& space = *rho.space();
    BipartiteState bp;
    bp.d_a = space.cap_a() + 1;
    bp.d_b = space.cap_b() + 1;
    bp.rho = Matrix::Zero(bp.d_a * bp.d_b, bp.d_a * bp.d_b);
    const auto& m = rho.entries();
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const auto& si = space.state(i);
        for (std::size_t j = 0; j < space.dimension(); ++j) {
            const auto& sj = space.state(j);
            if (si.atom_exc != sj.atom_exc) continue;
            bp.rho(pair_index(si.n_a, si.n_b, bp.d_b), pair_index(sj.n_a, sj.n_b, bp.d_b)) +=
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return bp;
}

BipartiteState partial_trace_atom(const StateVector& psi) {
    return partial_trace_atom(DensityMatrix::pure(psi));
}

Matrix reduced_state(const BipartiteState& bp, Subsystem keep) {
    bp.validate();
    const int d = keep == Subsystem::a ? bp.d_a : bp.d_b;
    Matrix out = Matrix::Zero(d, d);
    for (int x = 0; x < d; ++x) {
        for (int y = 0; y < d; ++y) {
            const int other = keep == Subsystem::a ? bp.d_b : bp.d_a;
            for (int k = 0; k < other; ++k) {
                out(x, y) += keep == Subsystem::a
                                 ? bp.rho(pair_index(x, k, bp.d_b), pair_index(y, k, bp.d_b))
                                 : bp.rho(pair_index(k, x, bp.d_b), pair_index(k, y, bp.d_b));
            }
        }
    }
    return out;
}

Matrix partial_transpose(const BipartiteState& bp, Subsystem which) {
    bp.validate();
    Matrix out(bp.rho.rows(), bp.rho.cols());
    for (int l = 0; l < bp.d_a; ++l) {
        for (int m = 0; m < bp.d_b; ++m) {
            for (int lp = 0; lp < bp.d_a; ++lp) {
                for (int mp = 0; mp < bp.d_b; ++mp) {
                    const auto src = which == Subsystem::b
                                         ? bp.rho(pair_index(l, mp, bp.d_b), pair_index(lp, m, bp.d_b))
                                         : bp.rho(pair_index(lp, m, bp.d_b), pair_index(l, mp, bp.d_b));
                    out(pair_index(l, m, bp.d_b), pair_index(lp, mp, bp.d_b)) = src;
                }
            }
        }
    }
    return out;
}

double negativity(const BipartiteState& bp, Subsystem which) {
    const Matrix pt = partial_transpose(bp, which);
    const Matrix herm = 0.5 * (pt + pt.adjoint());
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(herm, Eigen::EigenvaluesOnly);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        const double v = eig.eigenvalues()(i);
        if (v < kNegativeEigenvalue) sum += v;
    }
    return std::max(0.0, -sum);
}

NegativitySeries negativity_trajectory(const Trajectory& traj) {
    traj.validate();
    NegativitySeries out;
    out.reserve(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out.emplace_back(traj.times[k], negativity(partial_trace_atom(traj.states[k])));
    }
    return out;
}

NegativitySeries negativity_trajectory(const DensityTrajectory& traj) {
    traj.validate();
    NegativitySeries out;
    out.reserve(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out.emplace_back(traj.times[k], negativity(partial_trace_atom(traj.rhos[k])));
    }
    return out;
}

void write_negativity_csv(std::ostream& os, const NegativitySeries& series) {
    os << "t,negativity\n";
    for (const auto& [t, n] : series) os << format_number(t) << ',' << format_number(n) << '\n';
}

std::vector<double> schmidt_decomposition(const Matrix& amplitudes) {
    const Eigen::JacobiSVD<Matrix> svd(amplitudes);
    const auto& sv = svd.singularValues();
    std::vector<double> p(static_cast<std::size_t>(sv.size()));
    for (Eigen::Index i = 0; i < sv.size(); ++i) p[static_cast<std::size_t>(i)] = sv(i) * sv(i);
    return probabilities_from(std::move(p));
}

std::vector<double> schmidt_decomposition(const BipartiteState& bp) {
    bp.validate();
    const double purity = bp.purity();
    if (purity < 1.0 - 1e-8) {
        throw ValidationError("Schmidt decomposition needs a pure state (purity " +
                              std::to_string(purity) + ")");
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (bp.rho + bp.rho.adjoint()));
    const Vector top = eig.eigenvectors().col(eig.eigenvalues().size() - 1);
    Matrix amps(bp.d_a, bp.d_b);
    for (int l = 0; l < bp.d_a; ++l) {
        for (int m = 0; m < bp.d_b; ++m) amps(l, m) = top(pair_index(l, m, bp.d_b));
    }
    return schmidt_decomposition(amps);
}

namespace {
double inverse_sum_of_squares(const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p) s += v * v;
    return 1.0 / s;
}
}  // namespace

double participation_ratio(const Matrix& amplitudes) {
    return inverse_sum_of_squares(schmidt_decomposition(amplitudes));
}

double participation_ratio(const BipartiteState& bp) {
    return inverse_sum_of_squares(schmidt_decomposition(bp));
}

Matrix cantilever_amplitudes(const StateVector& psi) {
    const auto& space = *psi.space();
    Matrix amps = Matrix::Zero(space.cap_a() + 1, space.cap_b() + 1);
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        const auto& s = space.state(i);
        const Complex v = psi.amplitudes()(static_cast<Eigen::Index>(i));
        if (s.atom_exc > 0) {
            if (std::abs(v) > 1e-12) {
                throw ValidationError("state has weight on excited gas level " + to_string(s));
            }
            continue;
        }
        amps(s.n_a, s.n_b) = v;
    }
    return amps;
}

}  // namespace nanomech
