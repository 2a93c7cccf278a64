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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "nanomech/dynamics.hpp"
#include "nanomech/errors.hpp"

using namespace nanomech;
using std::numbers::pi;
using std::numbers::sqrt2;

namespace {

constexpr Complex kI{0.0, 1.0};

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return t;
}

// Independent propagator: dense matrix exponential.
Vector expm_evolve(const OperatorMatrix& H, const Vector& psi0, double t) {
    const Matrix u = (-kI * t * H.entries()).exp();
    return u * psi0;
}

SystemParams symmetric(double kappa) {
    SystemParams p;
    p.kappa_a = p.kappa_b = kappa;
    return p;
}

double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("Rabi exchange in the one-excitation manifold") {
    const double kappa = 1.3;
    const auto sp = manifold_space(1, 1);
    const auto H = hamiltonian(symmetric(kappa), sp);
    const auto psi0 = StateVector::basis(sp, {0, 1, 0});
    const double period = 2 * pi / (sqrt2 * kappa);
    const auto times = linspace(0.0, 2 * period, 81);
    const auto traj = evolve_schrodinger(H, psi0, times, 1e-11);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto ref = analytic_one_excitation(kappa, times[k], OneExcitationStart::g10);
        CHECK(max_abs_diff(traj.states[k].amplitudes(), ref.amplitudes()) < 1e-8);
        CHECK(std::abs(traj.states[k].norm() - 1.0) < 1e-9);
    }

    // complete transfer at sqrt2 kappa t = pi
    const double half = pi / (sqrt2 * kappa);
    const std::vector<double> at{half};
    const auto end = evolve_schrodinger(H, psi0, at, 1e-11).states.back();
    CHECK(std::norm(end.amplitude({0, 1, 0})) < 1e-12);
    CHECK(std::norm(end.amplitude({0, 0, 1})) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::norm(end.amplitude({1, 0, 0})) < 1e-12);
}

TEST_CASE("no coupling leaves the state unchanged") {
    const auto sp = manifold_space(1, 2);
    const auto H = hamiltonian(symmetric(0.0), sp);
    const auto psi0 = StateVector::basis(sp, {0, 1, 1});
    const auto traj = evolve_schrodinger(H, psi0, linspace(0, 10, 5));
    for (const auto& s : traj.states) CHECK(s.amplitudes() == psi0.amplitudes());
}

TEST_CASE("three-excitation run matches the matrix exponential") {
    const auto sp = manifold_space(1, 3);
    const auto H = hamiltonian(symmetric(1.0), sp);
    const auto psi0 = StateVector::basis(sp, {0, 3, 0});
    const auto times = linspace(0.0, 12.0, 20);
    const auto traj = evolve_schrodinger(H, psi0, times, 1e-11);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(max_abs_diff(traj.states[k].amplitudes(), expm_evolve(H, psi0.amplitudes(), times[k])) <
              1e-8);
    }
}

TEST_CASE("evolution in the boson picture with several gas excitations") {
    SystemParams p;
    p.kappa_a = 0.8;
    p.kappa_b = 1.4;
    const auto sp = truncated_space(3, 3);
    const auto H = hamiltonian(p, sp, Picture::lab, SpinMode::hp);
    const auto psi0 = StateVector::basis(sp, {0, 2, 1});
    const auto times = linspace(0.0, 5.0, 11);
    const auto traj = evolve_schrodinger(H, psi0, times, 1e-11);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(max_abs_diff(traj.states[k].amplitudes(), expm_evolve(H, psi0.amplitudes(), times[k])) <
              1e-8);
    }
}

TEST_CASE("evolve_schrodinger input checks") {
    const auto sp = manifold_space(1, 1);
    Matrix bad = Matrix::Zero(3, 3);
    bad(0, 1) = 1.0;
    const OperatorMatrix nonherm(sp, bad);
    const auto psi0 = StateVector::basis(sp, {0, 1, 0});
    const std::vector<double> t{0.0, 1.0};
    CHECK_THROWS_AS(evolve_schrodinger(nonherm, psi0, t), ValidationError);

    const auto H = hamiltonian(symmetric(1.0), sp);
    const StateVector unnormalised(sp, 2.0 * psi0.amplitudes());
    CHECK_THROWS_AS(evolve_schrodinger(H, unnormalised, t), ValidationError);

    const std::vector<double> backwards{1.0, 0.5};
    CHECK_THROWS_AS(evolve_schrodinger(H, psi0, backwards), ValidationError);

    // a tolerance below machine precision forces the step size to underflow
    CHECK_THROWS_AS(evolve_schrodinger(H, psi0, t, 1e-30), IntegrationError);
}

TEST_CASE("closed-form one-excitation states") {
    const auto sp = manifold_space(1, 1);
    auto s = analytic_one_excitation(1.0, 0.0, OneExcitationStart::g10);
    CHECK(s.amplitude({0, 1, 0}) == Complex(1.0));
    CHECK(s.amplitude({0, 0, 1}) == Complex(0.0));
    CHECK(s.amplitude({1, 0, 0}) == Complex(0.0));

    const double quarter = pi / 2 / sqrt2;  // sqrt2 kappa t = pi/2
    s = analytic_one_excitation(1.0, quarter, OneExcitationStart::g10);
    CHECK(std::abs(s.amplitude({0, 1, 0}) - 0.5) < 1e-15);
    CHECK(std::abs(s.amplitude({0, 0, 1}) + 0.5) < 1e-15);
    CHECK(std::abs(s.amplitude({1, 0, 0}) + kI / sqrt2) < 1e-15);
    CHECK(std::norm(s.amplitude({1, 0, 0})) == doctest::Approx(0.5));

    s = analytic_one_excitation(1.0, quarter, OneExcitationStart::e00);
    CHECK(std::norm(s.amplitude({0, 1, 0})) == doctest::Approx(0.5));
    CHECK(std::norm(s.amplitude({0, 0, 1})) == doctest::Approx(0.5));
    CHECK(std::norm(s.amplitude({1, 0, 0})) < 1e-30);

    // the e00 column is what the integrator produces from |e,0,0>
    const auto H = hamiltonian(symmetric(1.0), sp);
    const auto times = linspace(0.0, 6.0, 13);
    const auto traj = evolve_schrodinger(H, StateVector::basis(sp, {1, 0, 0}), times, 1e-11);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(max_abs_diff(traj.states[k].amplitudes(),
                           analytic_one_excitation(1.0, times[k], OneExcitationStart::e00).amplitudes()) <
              1e-8);
    }
}

TEST_CASE("heisenberg solution") {
    const auto p = symmetric(1.0);
    for (double t : {0.0, 0.3, 1.7, 4.0}) {
        const auto h = heisenberg_state(1, t, p);
        const double c = std::cos(sqrt2 * t);
        const double s = std::sin(sqrt2 * t);
        CHECK(std::abs(h.amplitude({0, 1, 0}) - 0.5 * (1 + c)) < 1e-14);
        CHECK(std::abs(h.amplitude({0, 0, 1}) - 0.5 * (c - 1)) < 1e-14);
        // opposite phase on the gas component relative to the Schrodinger solution
        CHECK(std::abs(h.amplitude({1, 0, 0}) - kI * s / sqrt2) < 1e-14);
        const auto sch = analytic_one_excitation(1.0, t, OneExcitationStart::g10);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(h.populations()[i] == doctest::Approx(sch.populations()[i]).epsilon(1e-12));
        }
    }

    const auto vac = heisenberg_state(0, 2.0, p);
    CHECK(vac.dimension() == 1);
    CHECK(std::abs(vac.amplitudes()(0) - 1.0) < 1e-15);

    const auto two = heisenberg_state(2, 0.0, p);
    CHECK(std::abs(two.amplitude({0, 2, 0}) - 1.0) < 1e-14);
    CHECK(std::abs(two.norm() - 1.0) < 1e-14);

    CHECK_THROWS_AS(heisenberg_state(3, 0.1, p, Picture::interaction, manifold_space(1, 3)),
                    CapacityError);
    CHECK_THROWS_AS(heisenberg_state(2, 0.1, p, Picture::interaction, manifold_space(2, 1)),
                    CapacityError);
}

TEST_CASE("lab-frame heisenberg states differ from the interaction picture by a global phase") {
    auto p = symmetric(0.9);
    p.omega0 = 17.0;
    for (int n : {1, 2, 3}) {
        const auto a = heisenberg_state(n, 1.3, p, Picture::lab);
        const auto b = heisenberg_state(n, 1.3, p, Picture::interaction);
        CHECK(std::abs(std::abs(a.amplitudes().dot(b.amplitudes())) - 1.0) < 1e-12);
    }
}

TEST_CASE("heisenberg and schrodinger populations agree in the boson picture") {
    const auto p = symmetric(1.0);
    for (int n : {1, 2, 3}) {
        const auto sp = manifold_space(n, n);
        const auto H = hamiltonian(p, sp, Picture::interaction, SpinMode::hp);
        const auto times = linspace(0.0, 9.0, 25);
        const auto traj = evolve_schrodinger(H, StateVector::basis(sp, {0, n, 0}), times, 1e-11);
        for (std::size_t k = 0; k < times.size(); ++k) {
            const auto h = heisenberg_state(n, times[k], p, Picture::interaction, sp);
            const auto ps = traj.states[k].populations();
            const auto ph = h.populations();
            for (std::size_t i = 0; i < ps.size(); ++i) CHECK(std::abs(ps[i] - ph[i]) < 1e-8);
        }
    }
}

TEST_CASE("dark states") {
    const auto one = manifold_space(1, 1);
    auto d = dark_state(1, 1.0, 1.0, one);
    CHECK(std::abs(d.amplitude({0, 0, 1}) - 1.0 / sqrt2) < 1e-15);
    CHECK(std::abs(d.amplitude({0, 1, 0}) + 1.0 / sqrt2) < 1e-15);
    CHECK(d.amplitude({1, 0, 0}) == Complex(0.0));

    d = dark_state(2, 2.0, 2.0, manifold_space(1, 2));
    const double r8 = std::sqrt(8.0);
    CHECK(std::abs(d.amplitude({0, 2, 0}) - sqrt2 / r8) < 1e-15);
    CHECK(std::abs(d.amplitude({0, 1, 1}) + 2.0 / r8) < 1e-15);
    CHECK(std::abs(d.amplitude({0, 0, 2}) - sqrt2 / r8) < 1e-15);

    d = dark_state(1, 0.7, 0.0, one);
    CHECK(std::abs(d.amplitude({0, 0, 1}) - 1.0) < 1e-15);
    CHECK(std::norm(d.amplitude({0, 1, 0})) < 1e-30);

    // asymmetric sign convention
    d = dark_state(1, 3.0, 4.0, one);
    CHECK(std::abs(d.amplitude({0, 0, 1}) - 0.6) < 1e-15);
    CHECK(std::abs(d.amplitude({0, 1, 0}) + 0.8) < 1e-15);

    CHECK_THROWS_AS(dark_state(1, 0.0, 0.0, one), ParameterError);
    CHECK_THROWS_AS(dark_state(2, 1.0, 1.0, one), CapacityError);
    CHECK(dark_state(0, 1.0, 1.0, truncated_space(1, 2)).amplitude({0, 0, 0}) == Complex(1.0));
}

TEST_CASE("dark states are annihilated by the coupling") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        SystemParams p;
        p.kappa_a = u(rng);
        p.kappa_b = u(rng);
        p.N = 50;
        for (int n = 0; n <= 3; ++n) {
            for (auto mode : {SpinMode::hp, SpinMode::exact}) {
                const auto sp = truncated_space(mode == SpinMode::hp ? 3 : 1, 3);
                const auto H = hamiltonian(p, sp, Picture::interaction, mode);
                const auto d = dark_state(n, p.kappa_a, p.kappa_b, sp);
                CHECK((H.entries() * d.amplitudes()).norm() <= 1e-12);
            }
        }
    }
}

TEST_CASE("dark weight distribution") {
    const auto p = symmetric(1.0);
    auto w = dark_weight_distribution(StateVector::basis(manifold_space(2, 2), {0, 2, 0}), p);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w[2] == doctest::Approx(0.25).epsilon(1e-12));

    w = dark_weight_distribution(StateVector::basis(manifold_space(1, 3), {0, 3, 0}), p);
    REQUIRE(w.size() == 4);
    const double expect3[] = {0.125, 0.375, 0.375, 0.125};
    for (int k = 0; k < 4; ++k) CHECK(w[k] == doctest::Approx(expect3[k]).epsilon(1e-12));

    // binomial(n, 1/2) from |g,n,0> in several spaces
    for (int n = 0; n <= 4; ++n) {
        for (const auto& sp : {manifold_space(1, n), truncated_space(1, n), build_space(1, n, n)}) {
            const auto wn = dark_weight_distribution(StateVector::basis(sp, {0, n, 0}), p);
            double sum = 0.0;
            for (int k = 0; k <= n; ++k) {
                const double binom = std::tgamma(n + 1) / (std::tgamma(k + 1) * std::tgamma(n - k + 1)) /
                                     std::pow(2.0, n);
                CHECK(wn[static_cast<std::size_t>(k)] == doctest::Approx(binom).epsilon(1e-12));
                sum += wn[static_cast<std::size_t>(k)];
            }
            CHECK(sum == doctest::Approx(1.0));
        }
    }

    // dark states are eigenstates of the dark-mode number
    SystemParams asym;
    asym.kappa_a = 0.4;
    asym.kappa_b = 1.9;
    for (int n = 0; n <= 3; ++n) {
        const auto sp = truncated_space(1, 3);
        const auto wd = dark_weight_distribution(dark_state(n, 0.4, 1.9, sp), asym);
        for (std::size_t k = 0; k < wd.size(); ++k) {
            CHECK(wd[k] == doctest::Approx(static_cast<int>(k) == n ? 1.0 : 0.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("dark weights are conserved by unitary evolution") {
    SystemParams p = symmetric(1.0);
    const auto sp = manifold_space(1, 3);
    const auto H = hamiltonian(p, sp);
    const auto traj = evolve_schrodinger(H, StateVector::basis(sp, {0, 2, 1}), linspace(0, 7, 8), 1e-11);
    const auto w0 = dark_weight_distribution(traj.states.front(), p);
    for (const auto& s : traj.states) {
        const auto w = dark_weight_distribution(s, p);
        for (std::size_t k = 0; k < w.size(); ++k) CHECK(std::abs(w[k] - w0[k]) < 1e-9);
    }
}

TEST_CASE("one-excitation populations are periodic") {
    const double kappa = 0.6;
    const double period = 2 * pi / (sqrt2 * kappa);
    const auto sp = manifold_space(1, 1);
    const auto H = hamiltonian(symmetric(kappa), sp);
    std::vector<double> times;
    for (int i = 0; i < 10; ++i) times.push_back(0.37 * i);
    for (int i = 0; i < 10; ++i) times.push_back(0.37 * i + period + 3.5);
    std::sort(times.begin(), times.end());
    const auto traj = evolve_schrodinger(H, StateVector::basis(sp, {0, 1, 0}), times, 1e-11);
    // compare t and t + period through the analytic reference, then directly
    std::vector<double> shifted;
    for (int i = 0; i < 10; ++i) shifted.push_back(0.37 * i + period);
    const auto later = evolve_schrodinger(H, StateVector::basis(sp, {0, 1, 0}), shifted, 1e-11);
    for (int i = 0; i < 10; ++i) {
        const auto p0 = traj.states[static_cast<std::size_t>(i)].populations();
        const auto p1 = later.states[static_cast<std::size_t>(i)].populations();
        for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(p0[k] - p1[k]) < 1e-8);
    }
}

TEST_CASE("trajectory csv layout") {
    const auto sp = manifold_space(1, 1);
    const auto H = hamiltonian(symmetric(1.0), sp);
    const auto traj = evolve_schrodinger(H, StateVector::basis(sp, {0, 1, 0}), linspace(0, 1, 3));
    std::ostringstream os;
    traj.write_csv(os);
    std::istringstream in(os.str());
    std::string header, first;
    std::getline(in, header);
    std::getline(in, first);
    CHECK(header ==
          "t,re(0;0;1),im(0;0;1),re(0;1;0),im(0;1;0),re(1;0;0),im(1;0;0),pop(0;0;1),pop(0;1;0),pop(1;0;0)");
    CHECK(first == "0,0,0,1,0,0,0,0,1,0");

    Trajectory broken = traj;
    broken.times[2] = broken.times[1];
    CHECK_THROWS_AS(broken.validate(), ValidationError);
}
