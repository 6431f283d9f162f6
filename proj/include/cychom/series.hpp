/*
   Copyright 2026 The cychom authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Power-series totalizations X[t]/t^{N+1} and X[t~]_{<=N}, optionally with an
// exterior variable, built at matrix level over an arbitrary complex X. The
// negative cyclic, Z/p-equivariant, homotopy fixed point and homotopy orbit
// complexes are all instances.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cychom/chain.hpp"

namespace cychom {

// A graded linear operator on a complex. ChainMap stores exactly this data;
// nothing here assumes it commutes with d.
using Operator = ChainMap;

Operator operator_identity(const ChainMap::Ptr& c);
// a + coeff * b; both must have the same source, target and shift.
Operator operator_add(const Operator& a, const Operator& b, Scalar coeff = 1);
Operator operator_scale(const Operator& a, Scalar coeff);
// a^k for k >= 0; a must be an endomorphism of degree 0.
Operator operator_power(const Operator& a, int k);
// 1 + tau + ... + tau^{p-1}
Operator norm_operator(const Operator& tau, int p);
// (tau - 1)^k
Operator tau_minus_one_power(const Operator& tau, int k);
// Endomorphism check a == b on every degree.
bool operators_equal(const Operator& a, const Operator& b);

enum class SeriesVariable {
    t,       // |t| = 2, |theta| = 1; truncation is the quotient by t^{N+1}
    t_dual,  // |t~| = -2, |theta~| = -1; truncation keeps t~-powers <= N
};

struct SeriesShape {
    SeriesVariable variable = SeriesVariable::t;
    bool theta = false;
    int N = 0;
    std::string t_name = "t";
    std::string theta_name = "θ";

    int monomial_degree(int k, int e) const {
        int d = 2 * k + e;
        return variable == SeriesVariable::t ? d : -d;
    }
};

// x t^k theta^from  ->  coeff * (+-1) * op(x) t^{k+dt} theta^to, with the sign
// (-1)^{|x|} when koszul is set (|x| the degree of x in the base complex).
// Terms leaving 0 <= k+dt <= N are dropped.
struct SeriesTerm {
    int from_theta = 0;
    int to_theta = 0;
    int dt = 0;
    Operator op;
    bool koszul = false;
    Scalar coeff = 1;
};

class SeriesComplex {
public:
    // The differential is d_X on coefficients plus the given terms. Only total
    // degrees >= floor are built when a floor is given (a subcomplex).
    static SeriesComplex build(ChainMap::Ptr base, SeriesShape shape, const std::vector<SeriesTerm>& terms,
                               DegreeWindow window, std::optional<int> floor = std::nullopt);

    const ChainMap::Ptr& complex() const noexcept { return total_; }
    const ChainMap::Ptr& base() const noexcept { return base_; }
    const SeriesShape& shape() const noexcept { return shape_; }
    std::optional<int> floor() const noexcept { return floor_; }
    // Same basis and differential with another stable window. Maps built on the
    // old total complex do not apply to the result.
    SeriesComplex with_window(DegreeWindow w) const;

    // Index of x t^k theta^e in the total basis, as (total degree, index).
    std::optional<std::pair<int, std::size_t>> locate(int x_degree, std::size_t x_index, int k, int e) const;

    // A map to another series complex given by the same kind of terms; op maps
    // this base into target's base. Targets outside the target's range are dropped.
    ChainMap map_to(const SeriesComplex& target, int shift, const std::vector<SeriesTerm>& terms) const;

private:
    struct Block {
        int k, e, x_degree;
        std::size_t offset;
    };

    ChainMap::Ptr base_, total_;
    SeriesShape shape_;
    std::optional<int> floor_;
    std::map<int, std::vector<Block>> blocks_;  // by total degree
};

}  // namespace cychom
