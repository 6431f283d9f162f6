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

// Connes' cyclic category, the finite p-cyclic category, their surjective
// (arrow) variants and the simplicial pieces inside them, with composition,
// enumeration, normal forms and the functors between them.

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cychom/chain.hpp"

namespace cychom {

// A morphism [n] -> [m]: the homotopy class of a degree one nondecreasing
// circle map sending marked points to marked points. Stored as the lift
// F: Z -> Z restricted to 0..n, nondecreasing, with F(i + n + 1) = F(i) + m + 1
// and F(0) in [0, m]. Point i goes to marked point F(i) mod (m + 1).
class CyclicMorphism {
public:
    // Throws std::invalid_argument unless `lift` is a normalized lift.
    CyclicMorphism(std::vector<int> lift, int target);
    // The rotation/partition encoding: [n]_sigma = sigma, sigma+1, ... cut into
    // consecutive blocks f_0 * ... * f_m of the given (possibly zero) sizes.
    static CyclicMorphism from_blocks(int rotation, const std::vector<int>& blocks);
    static CyclicMorphism identity(int n);
    // tau^k on [n]: z_i -> z_{i+k}.
    static CyclicMorphism rotation(int n, int k);

    int source() const noexcept { return static_cast<int>(lift_.size()) - 1; }
    int target() const noexcept { return target_; }
    const std::vector<int>& lift() const noexcept { return lift_; }
    // The lift at any integer.
    long long at(long long i) const;

    int rotation_index() const;
    std::vector<int> blocks() const;

    bool surjective() const;
    // Sends the zeroth marked point to the zeroth marked point (a map in Delta^op).
    bool preserves_basepoint() const noexcept { return lift_[0] == 0; }
    bool is_automorphism() const;
    std::string to_string() const;

    friend auto operator<=>(const CyclicMorphism&, const CyclicMorphism&) = default;
    friend bool operator==(const CyclicMorphism&, const CyclicMorphism&) = default;

private:
    std::vector<int> lift_;
    int target_ = 0;
};

// g o f
CyclicMorphism compose(const CyclicMorphism& g, const CyclicMorphism& f);

// Hom([n], [m]) in Lambda, or in the arrow variant (surjective on marked
// points). Sorted, no duplicates. Guard: n, m <= 6.
std::vector<CyclicMorphism> enumerate_hom(int n, int m, bool arrow_only = false);
// The same set built from (rotation, blocks) pairs.
std::vector<CyclicMorphism> enumerate_hom_by_blocks(int n, int m, bool arrow_only = false);
// Delta^op([n], [m]): the basepoint preserving part of Hom([n], [m]).
std::vector<CyclicMorphism> enumerate_simplicial_hom(int n, int m, bool arrow_only = false);

// f = tau^k o g with g preserving the basepoint. `target` puts the rotation on
// the target of f, which always exists and is unique; `source` puts it on the
// source (f = g o tau^k), which can fail to exist or to be unique.
enum class RotationSide { target, source };
struct Decomposition {
    int k = 0;
    CyclicMorphism simplicial;
};
std::vector<Decomposition> all_decompositions(const CyclicMorphism& f, RotationSide side);
// The unique decomposition; throws std::domain_error if there is none or several.
Decomposition decompose(const CyclicMorphism& f, RotationSide side = RotationSide::target);

// Monotone maps [source] -> [target] in Delta.
struct DeltaMorphism {
    int source = 0, target = 0;
    std::vector<int> values;
    friend bool operator==(const DeltaMorphism&, const DeltaMorphism&) = default;
};
DeltaMorphism compose(const DeltaMorphism& g, const DeltaMorphism& f);
// Joyal duality Delta^op([n], [m]) = Delta([m], [n]):
// phi(j) = #{1 <= i <= n : F(i) <= j}, inverse F(i) = min{j : phi(j) >= i}.
DeltaMorphism joyal_dual(const CyclicMorphism& f);
CyclicMorphism joyal_dual(const DeltaMorphism& phi);
// [a] + [b] = [a + b + 1], maps placed side by side.
DeltaMorphism ordinal_sum(const std::vector<DeltaMorphism>& parts);

// Objects of the finite p-cyclic category: [k_1, ..., k_p].
using PObject = std::vector<int>;
int point_count(const PObject& k);  // k_1 + ... + k_p + p
// Positions of the distinguished points 0, k_1 + 1, k_1 + k_2 + 2, ...
std::vector<int> distinguished_points(const PObject& k);
// (k_p, k_1, ..., k_{p-1}), the target of the block rotation.
PObject rotate_blocks(const PObject& k);

class PCyclicMorphism {
public:
    // nullopt unless the underlying map sends distinguished points bijectively
    // to distinguished points.
    static std::optional<PCyclicMorphism> make(PObject source, PObject target, CyclicMorphism map);
    static PCyclicMorphism identity(const PObject& k);
    // Moves the last block to the front: k -> rotate_blocks(k).
    static PCyclicMorphism block_rotation(const PObject& k);

    const PObject& source() const noexcept { return source_; }
    const PObject& target() const noexcept { return target_; }
    const CyclicMorphism& underlying() const noexcept { return map_; }
    // The zeroth distinguished point goes to the r-th one.
    int rotation_index() const noexcept { return r_; }
    // In the image of (Delta^op)^p: every distinguished point is fixed.
    bool is_multisimplicial() const;
    std::string to_string() const;

    friend auto operator<=>(const PCyclicMorphism&, const PCyclicMorphism&) = default;
    friend bool operator==(const PCyclicMorphism&, const PCyclicMorphism&) = default;

private:
    PCyclicMorphism(PObject s, PObject t, CyclicMorphism m, int r)
        : source_(std::move(s)), target_(std::move(t)), map_(std::move(m)), r_(r) {}
    PObject source_, target_;
    CyclicMorphism map_;
    int r_;
};

PCyclicMorphism compose(const PCyclicMorphism& g, const PCyclicMorphism& f);
// Guard: sum of k and of k' at most 6.
std::vector<PCyclicMorphism> enumerate_phom(const PObject& source, const PObject& target, bool arrow_only = false);
// (Delta^op)^p(k, k'): tuples of basepoint preserving maps, one per block.
std::vector<std::vector<CyclicMorphism>> enumerate_multisimplicial_hom(const PObject& source, const PObject& target,
                                                                        bool arrow_only = false);

// f = tau^r o f' with tau the block rotation and f' multisimplicial. Unique.
struct PDecomposition {
    int r = 0;
    PCyclicMorphism multisimplicial;
};
PDecomposition decompose(const PCyclicMorphism& f);

// The functors of the square
//   Delta^op      --i-->   Lambda
//      ^ o                   ^ j
//   (Delta^op)^p  --i_p--> pLambda
CyclicMorphism functor_i(const CyclicMorphism& f);
CyclicMorphism functor_j(const PCyclicMorphism& f);
PCyclicMorphism functor_ip(const std::vector<CyclicMorphism>& parts);
// Computed through Joyal duality and the ordinal sum in Delta.
CyclicMorphism functor_o(const std::vector<CyclicMorphism>& parts);
int functor_j(const PObject& k);
int functor_o(const PObject& k);

// All objects [k_1..k_p] with k_1 + ... + k_p = total.
std::vector<PObject> pobjects_of_total(int p, int total);

// The cyclic set C with C_n = Z/(n+1) = Aut([n]); f acts by k -> F(k) mod (m+1).
int cyclic_set_action(const CyclicMorphism& f, int k);

// Nondegenerate multisimplices of the p-fold simplicial set j*C, by
// multidegree, over all multidegrees of total at most max_total.
struct CellCount {
    int p = 3;
    int max_total = 2;
    std::map<PObject, std::vector<int>> nondegenerate;  // multidegree -> elements of Z/(sum k + p)
    std::size_t total() const;
};
CellCount jstar_cell_count(int p, int max_total = 2);

// The bicomplex with entries k[pLambda(k, k')], vertical differential the
// p-fold face sum and horizontal maps tau - 1, N alternating, truncated to
// |k'| <= depth and columns <= depth. Cohomological grading: entry (row, col)
// sits in degree -(row + col). The truncation is a subcomplex that agrees with
// the full complex in degrees > -depth.
struct ResolutionReport {
    ChainMap::Ptr total;
    HomologyReport homology;
    DegreeWindow window;
    bool ok = false;  // k in degree 0, zero in the other window degrees
    std::string detail;
};
ResolutionReport plambda_resolution_check(int p, const PObject& k, int depth);
// Only column 0's vertical complex, restricted to multisimplicial maps.
ResolutionReport multisimplicial_vertical_check(int p, const PObject& k, int depth);
// Row `row` of the bicomplex against (free module on (Delta^op)^p maps)
// tensored with the periodic complex of k[Z/p]: an explicit signed basis
// bijection certified as a chain isomorphism.
CheckReport horizontal_row_check(int p, const PObject& k, int row, int columns);

}  // namespace cychom
