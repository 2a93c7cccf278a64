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

#include "nanomech/errors.hpp"
#include "nanomech/physical.hpp"

using namespace nanomech;
using namespace nanomech::physical;

namespace {

// Independent evaluation of the reference device in plain SI arithmetic.
constexpr double kPi = 3.14159265358979323846;
constexpr double kHbarRef = 1.054571817e-34;
constexpr double kMuB = 9.2740100783e-24;
constexpr double kMu0Ref = 1.25663706212e-6;

double oracle_gradient() {
    const double mu = 1e6 * 0.6 * kMuB;
    const double d = 250e-9;
    return 3.0 * mu * kMu0Ref / (4.0 * kPi * d * d * d * d);
}

double oracle_a0() { return std::sqrt(kHbarRef / (2.0 * 1e-16 * 2.0 * kPi * 1e6)); }

}  // namespace

TEST_CASE("constants") {
    CHECK(kHbar == kHbarRef);
    CHECK(kBohrMagneton == kMuB);
    CHECK(kMu0 == doctest::Approx(4e-7 * kPi).epsilon(1e-9));
}

TEST_CASE("field gradient") {
    const auto dev = reference_device();
    CHECK(field_gradient(dev.mu, dev.d) == doctest::Approx(oracle_gradient()).epsilon(1e-14));
    CHECK(field_gradient(dev.mu, dev.d) == doctest::Approx(427.4).epsilon(1e-3));
    CHECK(field_gradient(dev.mu, 2 * dev.d) == doctest::Approx(field_gradient(dev.mu, dev.d) / 16).epsilon(1e-14));
    CHECK(field_gradient(0.0, dev.d) == 0.0);
    CHECK_THROWS_AS(field_gradient(1.0, 0.0), ParameterError);
    CHECK_THROWS_AS(field_gradient(1.0, -1e-9), ParameterError);
}

TEST_CASE("zero-point amplitude") {
    const double a0 = zero_point_amplitude(1e-16, 2 * kPi * 1e6);
    CHECK(a0 == doctest::Approx(oracle_a0()).epsilon(1e-14));
    CHECK(a0 == doctest::Approx(2.9e-13).epsilon(0.01));
    CHECK(zero_point_amplitude(4e-16, 2 * kPi * 1e6) == doctest::Approx(a0 / 2).epsilon(1e-14));
    CHECK(zero_point_amplitude(1e-16, 8 * kPi * 1e6) == doctest::Approx(a0 / 2).epsilon(1e-14));
    CHECK_THROWS_AS(zero_point_amplitude(0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(zero_point_amplitude(1.0, -1.0), ParameterError);
}

TEST_CASE("coupling constant") {
    const auto dev = reference_device();
    const auto k = coupling_constant(dev);
    const double direct = kMuB * oracle_gradient() * std::sqrt(100.0) * oracle_a0() / (std::sqrt(8.0) * kHbarRef);
    CHECK(k.rad_per_s == doctest::Approx(direct).epsilon(1e-13));
    CHECK(k.hz == doctest::Approx(direct / (2 * kPi)).epsilon(1e-13));
    CHECK(k.rad_per_s == doctest::Approx(38.5).epsilon(0.01));
    // rate in 1/s lies within a factor of three of 100
    CHECK(k.rad_per_s > 100.0 / 3.0);
    CHECK(k.rad_per_s < 300.0);

    auto more = dev;
    more.N *= 4;
    CHECK(coupling_constant(more).rad_per_s == doctest::Approx(2 * k.rad_per_s).epsilon(1e-13));
    auto far = dev;
    far.d *= 2;
    CHECK(coupling_constant(far).rad_per_s == doctest::Approx(k.rad_per_s / 16).epsilon(1e-13));
    auto heavy = dev;
    heavy.m_eff *= 9;
    heavy.omega0 *= 4;
    CHECK(coupling_constant(heavy).rad_per_s == doctest::Approx(k.rad_per_s / 6).epsilon(1e-13));
}

TEST_CASE("dipole interaction ratio") {
    const auto dev = reference_device();
    const double r = dipole_interaction_ratio(dev);
    CHECK(r == doctest::Approx(4 * 250e-9 * 10 / (oracle_a0() * 1e6)).epsilon(1e-13));
    CHECK(r >= 25.0);
    CHECK(r <= 35.0);
    auto big = dev;
    big.N_mag *= 1e6;
    CHECK(dipole_interaction_ratio(big) < 1e-4);
    auto stiff = dev;
    stiff.m_eff *= 4;
    CHECK(dipole_interaction_ratio(stiff) == doctest::Approx(2 * r).epsilon(1e-13));
}

TEST_CASE("device validation names the field") {
    auto dev = reference_device();
    CHECK_NOTHROW(dev.validate());
    dev.m_eff = 0.0;
    try {
        dev.validate();
        FAIL("expected a ParameterError");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("m_eff") != std::string::npos);
    }
    CHECK_THROWS_AS(coupling_constant(dev), ParameterError);
    CHECK_THROWS_AS(dipole_interaction_ratio(dev), ParameterError);
}

TEST_CASE("report rows carry units") {
    const auto rows = coupling_report(reference_device());
    REQUIRE(rows.size() == 5);
    CHECK(rows[2].name == "kappa");
    CHECK(rows[2].unit == "rad/s");
    CHECK(rows[3].unit == "Hz");
    CHECK(rows[3].value == doctest::Approx(rows[2].value / (2 * kPi)));
    for (const auto& r : rows) CHECK_FALSE(r.unit.empty());
}
