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

#include "nanomech/hilbert.hpp"

#include <algorithm>
#include <sstream>

#include "nanomech/errors.hpp"

namespace nanomech {

std::string to_string(const BasisState& s) {
    std::ostringstream os;
    os << s;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const BasisState& s) {
    return os << '(' << s.atom_exc << ';' << s.n_a << ';' << s.n_b << ')';
}

HilbertSpace::HilbertSpace(int atom_cap, int cap_a, int cap_b, std::optional<int> manifold,
                           std::optional<int> max_exc)
    : atom_cap_(atom_cap),
      cap_a_(cap_a),
      cap_b_(cap_b),
      manifold_(manifold),
      max_excitations_(max_exc) {
    if (atom_cap < 0 || cap_a < 0 || cap_b < 0) {
        throw ParameterError("truncation caps must be nonnegative");
    }
    lookup_.assign(static_cast<std::size_t>(atom_cap + 1) * (cap_a + 1) * (cap_b + 1), -1);
    for (int s = 0; s <= atom_cap; ++s) {
        for (int a = 0; a <= cap_a; ++a) {
            for (int b = 0; b <= cap_b; ++b) {
                const int total = s + a + b;
                if (manifold_ && total != *manifold_) continue;
                if (max_excitations_ && total > *max_excitations_) continue;
                const BasisState st{s, a, b};
                lookup_[static_cast<std::size_t>(slot(st))] =
                    static_cast<std::ptrdiff_t>(basis_.size());
                basis_.push_back(st);
            }
        }
    }
}

std::ptrdiff_t HilbertSpace::slot(const BasisState& s) const {
    if (s.atom_exc < 0 || s.n_a < 0 || s.n_b < 0 || s.atom_exc > atom_cap_ || s.n_a > cap_a_ ||
        s.n_b > cap_b_) {
        return -1;
    }
    return (static_cast<std::ptrdiff_t>(s.atom_exc) * (cap_a_ + 1) + s.n_a) * (cap_b_ + 1) + s.n_b;
}

bool HilbertSpace::contains(const BasisState& s) const {
    const auto k = slot(s);
    return k >= 0 && lookup_[static_cast<std::size_t>(k)] >= 0;
}

std::size_t HilbertSpace::index_of(const BasisState& s) const {
    const auto k = slot(s);
    if (k < 0 || lookup_[static_cast<std::size_t>(k)] < 0) {
        throw LookupError("basis state " + to_string(s) + " is not a member of the space");
    }
    return static_cast<std::size_t>(lookup_[static_cast<std::size_t>(k)]);
}

int HilbertSpace::highest_excitation() const {
    int best = 0;
    for (const auto& s : basis_) best = std::max(best, s.total_excitations());
    return best;
}

void HilbertSpace::write_csv(std::ostream& os) const {
    os << "index,atom_exc,n_a,n_b\n";
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        const auto& s = basis_[i];
        os << i << ',' << s.atom_exc << ',' << s.n_a << ',' << s.n_b << '\n';
    }
}

SpacePtr build_space(int atom_cap, int cap_a, int cap_b) {
    return SpacePtr(new HilbertSpace(atom_cap, cap_a, cap_b, std::nullopt, std::nullopt));
}

SpacePtr manifold_space(int atom_cap, int n_exc) {
    if (n_exc < 0) throw ParameterError("excitation number must be nonnegative");
    return SpacePtr(new HilbertSpace(std::min(atom_cap, n_exc), n_exc, n_exc, n_exc, std::nullopt));
}

SpacePtr truncated_space(int atom_cap, int max_exc) {
    if (max_exc < 0) throw ParameterError("excitation number must be nonnegative");
    return SpacePtr(
        new HilbertSpace(std::min(atom_cap, max_exc), max_exc, max_exc, std::nullopt, max_exc));
}

}  // namespace nanomech
