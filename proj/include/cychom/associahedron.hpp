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

// Cellular chains on the Stasheff associahedra as a dg operad, with the
// unital extension, evaluation on A-infinity algebras and the hom complexes of
// the semidirect category of the cyclic category with this operad.
//
// A cell is a stable planar tree; its chain is the composite of its vertex
// corollas taken in preorder. Corollas have homological degree d - 2, so
// reordering vertices costs the Koszul sign of their arities.

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cychom/ainf.hpp"
#include "cychom/chain.hpp"
#include "cychom/cyccat.hpp"

namespace cychom {

// Text form: "x" is a leaf (the identity tree), "(t1 t2 ...)" a vertex with
// children written without separators, "1" the 0-ary strict unit.
// Example: "(x(xx))" is mu_2 o_2 mu_2.
class PlanarTree {
public:
    static PlanarTree identity() { return PlanarTree("x"); }
    static PlanarTree unit() { return PlanarTree("1"); }
    static PlanarTree corolla(int d);
    static PlanarTree vertex(const std::vector<PlanarTree>& children);
    // Validates syntax and stability (every vertex has at least two children).
    static PlanarTree parse(std::string_view text);

    int leaves() const;
    int vertices() const;
    int internal_edges() const { return vertices() > 0 ? vertices() - 1 : 0; }
    // Homological cell degree: leaves - 2 - internal edges (0 for the identity and the unit).
    int degree() const;
    bool is_identity() const noexcept { return code_ == "x"; }
    bool is_unit() const noexcept { return code_ == "1"; }
    // Arities of the vertices in preorder.
    std::vector<int> vertex_arities() const;
    const std::string& to_string() const noexcept { return code_; }

    friend auto operator<=>(const PlanarTree&, const PlanarTree&) = default;
    friend bool operator==(const PlanarTree&, const PlanarTree&) = default;

private:
    explicit PlanarTree(std::string code) : code_(std::move(code)) {}
    std::string code_;
};

// An F_p-combination of trees with a common number of leaves.
class CellChain {
public:
    explicit CellChain(PrimeField field) : field_(field) {}
    CellChain(PrimeField field, const PlanarTree& t, Scalar coeff = 1);

    const PrimeField& field() const noexcept { return field_; }
    const std::map<PlanarTree, Scalar>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    void add(const PlanarTree& t, Scalar coeff);
    CellChain& operator+=(const CellChain& other);
    CellChain scaled(Scalar c) const;
    std::string to_string() const;

    friend bool operator==(const CellChain& a, const CellChain& b) { return a.terms_ == b.terms_; }

private:
    PrimeField field_;
    std::map<PlanarTree, Scalar> terms_;
};

// Trees with d leaves grouped by cell degree. Guard: 1 <= d <= 7.
std::map<int, std::vector<PlanarTree>> enumerate_cells(int d);

CellChain boundary(const PlanarTree& t, const PrimeField& field);
CellChain boundary(const CellChain& c);

// a o_slot b, slots counted from 1. With `unital` set, b may be the unit and the
// trivalent collapse rule applies; otherwise grafting the unit throws.
CellChain graft(const PlanarTree& a, int slot, const PlanarTree& b, const PrimeField& field, bool unital = false);
CellChain graft(const CellChain& a, int slot, const CellChain& b, bool unital = false);
// gamma(a; b_1, ..., b_k), grafted from the left.
CellChain compose_all(const CellChain& a, const std::vector<CellChain>& inputs, bool unital = false);

// A multilinear map A^{(x) arity} -> A, dense over basis tuples (first input most significant).
struct Multilinear {
    int arity = 0;
    int degree = 0;  // cohomological
    std::size_t dim = 0;
    std::vector<std::vector<Scalar>> table;
    friend bool operator==(const Multilinear&, const Multilinear&) = default;
};

// m_d of the algebra as a table.
Multilinear structure_map(const AInfAlgebra& a, int d);
// (f o_i g)(x) = (-1)^{|g| (|x_1| + ... + |x_{i-1}|)} f(x_1, ..., g(x_i, ...), ...)
Multilinear partial_compose(const AInfAlgebra& a, const Multilinear& f, int slot, const Multilinear& g);
// [m_1, f] = m_1 o f - (-1)^{|f|} sum_i f o_i m_1
Multilinear end_differential(const AInfAlgebra& a, const Multilinear& f);
// The operation of a chain: each vertex becomes m_d, trees compose as operations.
// Throws std::invalid_argument if a vertex exceeds the algebra's arity bound,
// or if the unit is used on an algebra without one.
Multilinear evaluate_on_algebra(const AInfAlgebra& a, const PlanarTree& t);
Multilinear evaluate_on_algebra(const AInfAlgebra& a, const CellChain& c);

// Checks evaluate(boundary T) = [m_1, evaluate(T)] for every tree with at most
// max_leaves leaves, and evaluate(S o_i T) = evaluate(S) o_i evaluate(T) for
// every pair with at most max_leaves leaves in total.
CheckReport check_operad_map(const AInfAlgebra& a, int max_leaves);

// A morphism of the semidirect category: a cyclic map decorated by one cell per fibre.
struct Decorated {
    CyclicMorphism map;
    std::vector<PlanarTree> cells;  // cells[i] has |f^{-1}(i)| leaves (the unit if empty)
    friend auto operator<=>(const Decorated&, const Decorated&) = default;
    friend bool operator==(const Decorated&, const Decorated&) = default;
};
using SemidirectChain = std::map<Decorated, Scalar>;

// Fibres of f in the order of the cut circle [n]_sigma.
std::vector<std::vector<int>> ordered_fibres(const CyclicMorphism& f);
// Identity trees on fibres of size 1 and the unit on empty ones; throws if a
// fibre is larger.
Decorated identity_decoration(const CyclicMorphism& f);
// g o f, with the operadic compositions fibre by fibre and the Koszul sign of
// regrouping the tensor factors.
SemidirectChain compose(const SemidirectChain& g, const SemidirectChain& f, const PrimeField& field);

struct SemidirectHom {
    int n = 0, m = 0;
    bool arrow_only = true;
    std::vector<CyclicMorphism> maps;
    ChainMap::Ptr complex;    // cohomological: a tensor of cells sits in minus its total degree
    ChainMap::Ptr discrete;   // k[maps] in degree 0
    std::shared_ptr<const ChainMap> augmentation;  // P
    // Index of a decorated morphism in complex->basis() at its degree.
    std::map<Decorated, std::size_t> index;
};
// Guard: n, m <= 4. Without arrow_only, empty fibres carry the unit.
SemidirectHom semidirect_hom(int n, int m, const PrimeField& field, bool arrow_only = true);

}  // namespace cychom
