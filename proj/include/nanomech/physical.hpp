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

#include <string>
#include <vector>

namespace nanomech::physical {

// CODATA 2018
inline constexpr double kHbar = 1.054571817e-34;         // J s
inline constexpr double kMu0 = 1.25663706212e-6;         // T m / A
inline constexpr double kBohrMagneton = 9.2740100783e-24;  // J / T
// Per-atom moment of bulk nickel, in Bohr magnetons.
inline constexpr double kNickelMomentBohr = 0.6;

/// Tip-magnet / trap geometry and cantilever mode.
struct DeviceParams {
    double mu = 0.0;      // tip-magnet moment, J/T
    double d = 0.0;       // magnet-atom distance, m
    double N = 0.0;       // atoms in the trap
    double m_eff = 0.0;   // effective cantilever mass, kg
    double omega0 = 0.0;  // angular mode frequency, rad/s
    double N_mag = 0.0;   // atoms in the tip magnet
    double B0 = 1.0;      // bias field, T (informational)

    /// Throws ParameterError naming the first non-positive field.
    void validate() const;
};

/// 100 nm-scale setup: 1e-16 kg cantilever at 1 MHz, 100 atoms at 250 nm
/// from a 1e6-atom nickel magnet.
DeviceParams reference_device();

/// G_m = 3 mu mu0 / (4 pi d^4), T/m.
double field_gradient(double mu, double d);

/// a0 = sqrt(hbar / (2 m_eff omega0)), m.
double zero_point_amplitude(double m_eff, double omega0);

struct CouplingRate {
    double rad_per_s;  // kappa as an angular rate
    double hz;         // kappa / 2 pi
};

/// kappa = mu_B G_m sqrt(N) a0 / (sqrt(8) hbar).
CouplingRate coupling_constant(const DeviceParams& dev);

/// Zeeman-to-direct dipole coupling ratio 4 d sqrt(N) / (a0 N_mag).
double dipole_interaction_ratio(const DeviceParams& dev);

struct ReportRow {
    std::string name;
    double value;
    std::string unit;
};

std::vector<ReportRow> coupling_report(const DeviceParams& dev);

}  // namespace nanomech::physical
