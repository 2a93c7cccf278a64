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

#include "nanomech/physical.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "nanomech/errors.hpp"

namespace nanomech::physical {

void DeviceParams::validate() const {
    const std::pair<const char*, double> fields[] = {
        {"mu", mu}, {"d", d}, {"N", N}, {"m_eff", m_eff}, {"omega0", omega0}, {"N_mag", N_mag},
        {"B0", B0}};
    for (const auto& [name, value] : fields) {
        if (!(value > 0.0)) {
            throw ParameterError(std::string("device field '") + name + "' must be > 0");
        }
    }
}

DeviceParams reference_device() {
    DeviceParams dev;
    dev.N_mag = 1e6;
    dev.mu = dev.N_mag * kNickelMomentBohr * kBohrMagneton;
    dev.d = 250e-9;
    dev.N = 100;
    dev.m_eff = 1e-16;
    dev.omega0 = 2.0 * std::numbers::pi * 1e6;
    dev.B0 = 1e-4;
    return dev;
}

double field_gradient(double mu, double d) {
    if (!(d > 0.0)) throw ParameterError("distance d must be > 0");
    return 3.0 * mu * kMu0 / (4.0 * std::numbers::pi * std::pow(d, 4));
}

double zero_point_amplitude(double m_eff, double omega0) {
    if (!(m_eff > 0.0)) throw ParameterError("m_eff must be > 0");
    if (!(omega0 > 0.0)) throw ParameterError("omega0 must be > 0");
    return std::sqrt(kHbar / (2.0 * m_eff * omega0));
}

CouplingRate coupling_constant(const DeviceParams& dev) {
    dev.validate();
    const double g = field_gradient(dev.mu, dev.d);
    const double a0 = zero_point_amplitude(dev.m_eff, dev.omega0);
    const double kappa = kBohrMagneton * g * std::sqrt(dev.N) * a0 / (std::sqrt(8.0) * kHbar);
    return {kappa, kappa / (2.0 * std::numbers::pi)};
}

double dipole_interaction_ratio(const DeviceParams& dev) {
    dev.validate();
    const double a0 = zero_point_amplitude(dev.m_eff, dev.omega0);
    return 4.0 * dev.d * std::sqrt(dev.N) / (a0 * dev.N_mag);
}

std::vector<ReportRow> coupling_report(const DeviceParams& dev) {
    const auto kappa = coupling_constant(dev);
    return {
        {"field_gradient", field_gradient(dev.mu, dev.d), "T/m"},
        {"zero_point_amplitude", zero_point_amplitude(dev.m_eff, dev.omega0), "m"},
        {"kappa", kappa.rad_per_s, "rad/s"},
        {"kappa_over_2pi", kappa.hz, "Hz"},
        {"dipole_interaction_ratio", dipole_interaction_ratio(dev), "1"},
    };
}

}  // namespace nanomech::physical
