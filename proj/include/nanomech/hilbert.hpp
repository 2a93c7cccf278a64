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

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nanomech {

/// One tensor-product label |atom_exc, n_a, n_b>: collective atomic
/// excitations (J+M in Dicke labels) and vibron numbers of cantilevers a, b.
struct BasisState {
    int atom_exc = 0;
    int n_a = 0;
    int n_b = 0;

    int total_excitations() const { return atom_exc + n_a + n_b; }

    auto operator<=>(const BasisState&) const = default;
};

std::string to_string(const BasisState& s);
std::ostream& operator<<(std::ostream& os, const BasisState& s);

class HilbertSpace;
using SpacePtr = std::shared_ptr<const HilbertSpace>;

/// Ordered, truncated basis of atom (x) cantilever a (x) cantilever b.
///
/// The basis is sorted lexicographically on (atom_exc, n_a, n_b) and is
/// immutable once built. Spaces are shared by the operators and states
/// defined on them, so they are always handled through SpacePtr.
class HilbertSpace {
   public:
    int atom_cap() const { return atom_cap_; }
    int cap_a() const { return cap_a_; }
    int cap_b() const { return cap_b_; }

    /// Set when every member has exactly this many total excitations.
    std::optional<int> manifold() const { return manifold_; }
    /// Set when the basis was filtered to total excitations <= this value.
    std::optional<int> max_excitations() const { return max_excitations_; }

    std::size_t dimension() const { return basis_.size(); }
    const std::vector<BasisState>& basis() const { return basis_; }
    const BasisState& state(std::size_t i) const { return basis_.at(i); }

    bool contains(const BasisState& s) const;
    /// Throws LookupError naming the state if it is not a member.
    std::size_t index_of(const BasisState& s) const;

    /// Largest total excitation number among the members.
    int highest_excitation() const;

    /// CSV rows `index,atom_exc,n_a,n_b` with a header line.
    void write_csv(std::ostream& os) const;

    friend SpacePtr build_space(int atom_cap, int cap_a, int cap_b);
    friend SpacePtr manifold_space(int atom_cap, int n_exc);
    friend SpacePtr truncated_space(int atom_cap, int max_exc);

   private:
    HilbertSpace(int atom_cap, int cap_a, int cap_b, std::optional<int> manifold,
                 std::optional<int> max_exc);

    std::ptrdiff_t slot(const BasisState& s) const;

    int atom_cap_;
    int cap_a_;
    int cap_b_;
    std::optional<int> manifold_;
    std::optional<int> max_excitations_;
    std::vector<BasisState> basis_;
    // dense (atom, a, b) -> basis index table, -1 for non-members
    std::vector<std::ptrdiff_t> lookup_;
};

/// Full product space with dimension (atom_cap+1)(cap_a+1)(cap_b+1).
SpacePtr build_space(int atom_cap, int cap_a, int cap_b);

/// Fixed-excitation manifold: all states with total excitations n_exc and
/// atom_exc <= atom_cap. Cantilever caps are n_exc.
SpacePtr manifold_space(int atom_cap, int n_exc);

/// Union of manifolds 0..max_exc (atom_exc <= atom_cap, cantilever caps
/// max_exc). Closed under the resonant Hamiltonian and collective decay,
/// which makes it the natural space for dissipative runs.
SpacePtr truncated_space(int atom_cap, int max_exc);

}  // namespace nanomech
