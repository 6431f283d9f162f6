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

// Cyclic and cocyclic modules valued in chain complexes, presented on
// generators, with their bar and cobar totalizations.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cychom/ainf.hpp"
#include "cychom/associahedron.hpp"
#include "cychom/chain.hpp"
#include "cychom/cyccat.hpp"
#include "cychom/keyed.hpp"
#include "cychom/series.hpp"

namespace cychom {

// A functor out of the semidirect category, given on objects [0]..[bound()].
// Always owned by a shared_ptr; complexes built from it keep it alive for naming.
// Each Q_n has a keyed basis and an internal differential of degree +1.
class CyclicModule : public std::enable_shared_from_this<CyclicModule> {
public:
    virtual ~CyclicModule() = default;
    virtual const PrimeField& field() const = 0;
    virtual int bound() const = 0;
    // Plain k-linear modules: cells act through the augmentation.
    virtual bool plain() const = 0;
    // Accepts non-surjective maps (units on empty fibres, or degeneracies).
    virtual bool unital() const = 0;
    // Largest s for which a corolla of arity s can act nontrivially.
    virtual int top_arity() const = 0;
    virtual const KeyedBasis& object(int n) const = 0;
    virtual std::string name(int n, const std::string& key) const = 0;
    // Name with the given points of [n] marked as distinguished.
    virtual std::string marked_name(int n, const std::string& key, const std::vector<int>& marks) const;
    virtual void differential(int n, const std::string& key, Terms& out) const = 0;
    // Q(g) on a basis element of Q_{source}; the terms are keys of Q_{target}.
    virtual void act(const Decorated& g, const std::string& key, Terms& out) const = 0;
    // Largest degree of Q_n[n] over n > L; nullopt when unbounded or unknown.
    virtual std::optional<int> excluded_top(int L) const = 0;
};

// Q_n = A^{(n+1)}; (f, cells) acts by regrouping the inputs along the fibres of
// f (cut-circle order, Koszul sign) and applying the evaluated cells.
std::shared_ptr<const CyclicModule> hochschild_functor(const AInfAlgebra& a, int bound);
// k in every degree-0 object, every map acting by the identity.
std::shared_ptr<const CyclicModule> constant_module(const PrimeField& field, int bound);
// k[Lambda([m], -)], or its surjective part, acting by postcomposition.
std::shared_ptr<const CyclicModule> representable_module(int m, int bound, const PrimeField& field,
                                                         bool arrow_only = false);

// The restriction along j: Q_{k_1..k_p} = Q_{k_1 + ... + k_p + p - 1}.
struct PCyclicModule {
    std::shared_ptr<const CyclicModule> base;
    int p = 3;
    const KeyedBasis& object(const PObject& k) const { return base->object(functor_j(k)); }
    void act(const PCyclicMorphism& f, const std::vector<PlanarTree>& cells, const std::string& key,
             Terms& out) const;
};
PCyclicModule restrict_along_j(std::shared_ptr<const CyclicModule> q, int p);

// Contravariant analogue: (f, cells) with f: [n] -> [m] maps Q^m to Q^n.
class CocyclicModule : public std::enable_shared_from_this<CocyclicModule> {
public:
    virtual ~CocyclicModule() = default;
    virtual const PrimeField& field() const = 0;
    virtual int bound() const = 0;
    virtual int top_arity() const = 0;
    virtual const KeyedBasis& object(int n) const = 0;
    virtual std::string name(int n, const std::string& key) const = 0;
    virtual std::string marked_name(int n, const std::string& key, const std::vector<int>& marks) const;
    virtual void differential(int n, const std::string& key, Terms& out) const = 0;
    virtual void coact(const Decorated& g, const std::string& key, Terms& out) const = 0;
    // Smallest degree of Q^n[-n] over n > L; nullopt when unbounded or unknown.
    virtual std::optional<int> excluded_bottom(int L) const = 0;
};

// Degreewise dual: basis keys are shared, degrees negated, maps transposed.
std::shared_ptr<const CocyclicModule> dual_module(std::shared_ptr<const CyclicModule> q);
std::shared_ptr<const CocyclicModule> constant_comodule(const PrimeField& field, int bound);

struct PCocyclicModule {
    std::shared_ptr<const CocyclicModule> base;
    int p = 3;
};
PCocyclicModule restrict_along_j(std::shared_ptr<const CocyclicModule> q, int p);

enum class BarVariant { bar, cyclic_bar, negative_cyclic, pfold, zp_equivariant };
enum class CobarVariant { cobar, cocyclic_cobar, positive_cocyclic, pfold_cocyclic, zp_positive };

struct ModuleTotalization {
    ChainMap::Ptr complex;
    // Connes-signed cyclic operator on the (co)cyclic bar complex, or the
    // block rotation on the p-fold one.
    std::optional<Operator> tau;
    // The power series complex for the equivariant variants; complex is its total.
    std::optional<SeriesComplex> series;
};

// Words n <= L (p-fold: k_1 + ... + k_p <= L), series powers <= N. Throws
// std::invalid_argument on a variant that needs the other kind of module.
ModuleTotalization bar_totalization(const CyclicModule& q, BarVariant v, int L, int N = 0);
ModuleTotalization bar_totalization(const PCyclicModule& q, BarVariant v, int L, int N = 0);
ModuleTotalization cobar_totalization(const CocyclicModule& q, CobarVariant v, int L, int N = 0);
ModuleTotalization cobar_totalization(const PCocyclicModule& q, CobarVariant v, int L, int N = 0);

// Relations among generators: functoriality on every composable pair of
// generators (single-corolla faces, rotations, degeneracies when unital) with
// objects <= max_object, and compatibility of d with the cell boundary.
CheckReport check_module_relations(const CyclicModule& q, int max_object);

enum class HUnitality { h_unital, not_h_unital, undetermined };
std::string to_string(HUnitality h);
struct HUnitalityReport {
    HUnitality verdict = HUnitality::undetermined;
    HomologyReport homology;
    DegreeWindow window;
    std::string detail;
};
// Bar complex homology over the stable window at truncation L.
HUnitalityReport h_unitality_check(const CyclicModule& q, int L);

// CC^nu of the surjective part of k[Lambda([m], -)] against the normalized
// cyclic bar complex of k[Lambda([m], -)]: x -> x, x e -> (-1)^{n+1} s_0 x.
struct NormalizationReport {
    int m = 0, L = 0;
    bool bijective = false;        // onto the nondegenerate basis
    bool differentials = false;    // Phi d = b-bar Phi
    bool epsilon = false;          // Phi B^nu = B-bar Phi
    bool anticommute = false;      // b-bar B-bar + B-bar b-bar = 0
    bool degenerate_acyclic = false;
    bool projection_quasi_iso = false;
    std::size_t checked = 0;
    std::string detail;
    bool ok() const {
        return bijective && differentials && epsilon && anticommute && degenerate_acyclic && projection_quasi_iso;
    }
};
// Guard: m <= 3, L <= 5.
NormalizationReport normalized_split_check(int m, int L, const PrimeField& field);

// A simplicial chain complex is a plain cyclic module used through its
// basepoint preserving maps only. Its total decalage is the pullback along o.
struct MultisimplicialModule {
    std::shared_ptr<const CyclicModule> base;
    int p = 3;
    const KeyedBasis& object(const PObject& k) const { return base->object(functor_o(k)); }
    void act(const std::vector<CyclicMorphism>& parts, const std::string& key, Terms& out) const;
};
MultisimplicialModule decalage(std::shared_ptr<const CyclicModule> x, int p);
// sum_{i=0}^{n} (-1)^i d_i plus (-1)^n d_X on X_n[n], n <= L.
ChainMap::Ptr simplicial_bar_complex(const CyclicModule& x, int L);
// sum_l sum_i (-1)^{i + k_1 + ... + k_{l-1}} d^l_i plus the internal term, |k| <= L.
ChainMap::Ptr multisimplicial_bar_complex(const MultisimplicialModule& d, int L);

struct DecalageReport {
    HomologyReport bar, multi;
    DegreeWindow window;
    bool ok = false;
    std::string detail;
};
DecalageReport decalage_check(std::shared_ptr<const CyclicModule> x, int p, int L);

// A signed basis bijection source -> target matching names after `rename`,
// with sign(degree, index) on the source; nullopt if the names do not match.
std::optional<ChainMap> basis_matching(const ChainMap::Ptr& source, const ChainMap::Ptr& target,
                                       const std::function<Scalar(int, std::size_t)>& sign,
                                       const std::function<std::string(const std::string&)>& rename = {});

}  // namespace cychom
