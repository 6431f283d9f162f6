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


#include <map>
#include <queue>

#include "cychom/cycmod.hpp"
#include "cychom/hochschild.hpp"
#include "doctest.h"
#include "testkit.hpp"

using namespace cychom;

namespace {

constexpr std::uint32_t kP = 3;

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
        s.replace(pos, from.size(), to);
    return s;
}

// A basis bijection source -> target by name, with the diagonal signs forced by
// the differentials and by the extra operator pairs (propagated along nonzero
// entries). The caller verifies the result.
std::optional<ChainMap> diagonal_match(const ChainMap::Ptr& source, const ChainMap::Ptr& target,
                                       const std::function<std::string(const std::string&)>& rename = {},
                                       const std::vector<std::pair<const Operator*, const Operator*>>& ops = {}) {
    const auto& sb = source->basis();
    const auto& tb = target->basis();
    if (sb.dims() != tb.dims()) return std::nullopt;
    std::map<int, std::unordered_map<std::string, std::size_t>> index;
    for (auto [deg, n] : tb.dims())
        for (std::size_t i = 0; i < n; ++i) index[deg].emplace(tb.name(deg, i), i);
    std::map<int, std::vector<std::size_t>> image;
    for (auto [deg, n] : sb.dims())
        for (std::size_t i = 0; i < n; ++i) {
            const auto name = rename ? rename(sb.name(deg, i)) : sb.name(deg, i);
            auto it = index[deg].find(name);
            if (it == index[deg].end()) return std::nullopt;
            image[deg].push_back(it->second);
        }
    const auto& F = source->field();
    std::map<int, std::vector<Scalar>> sign;
    for (auto [deg, n] : sb.dims()) sign[deg].assign(n, 0);
    // A source entry v at (r, i) and a target entry w at (f r, f i) force s_r = s_i w / v.
    std::map<std::pair<int, std::size_t>, std::vector<std::tuple<int, std::size_t, Scalar>>> edges;
    auto add_edges = [&](int deg, int up, const SparseMatrix& ms, const SparseMatrix& mt) {
        if (!image.count(up)) return;
        for (std::size_t i = 0; i < ms.cols(); ++i)
            for (const auto& e : ms.column(i)) {
                const Scalar w = mt.at(image[up][e.index], image[deg][i]);
                if (w == 0) continue;
                const Scalar ratio = F.mul(w, F.inv(e.value));
                edges[{deg, i}].emplace_back(up, e.index, ratio);
                edges[{up, std::size_t{e.index}}].emplace_back(deg, i, F.inv(ratio));
            }
    };
    for (auto [deg, n] : sb.dims()) {
        (void)n;
        add_edges(deg, source->next(deg), source->d(deg), target->d(deg));
        for (auto [os, ot] : ops) add_edges(deg, deg + os->shift(), os->component(deg), ot->component(deg));
    }
    for (auto [deg, n] : sb.dims())
        for (std::size_t i = 0; i < n; ++i) {
            if (sign[deg][i] != 0) continue;
            sign[deg][i] = 1;
            std::queue<std::pair<int, std::size_t>> todo;
            todo.push({deg, i});
            while (!todo.empty()) {
                auto [d0, i0] = todo.front();
                todo.pop();
                for (auto [d1, i1, r] : edges[{d0, i0}]) {
                    if (sign[d1][i1] != 0) continue;
                    sign[d1][i1] = F.mul(sign[d0][i0], r);
                    todo.push({d1, i1});
                }
            }
        }
    return basis_matching(source, target, [&](int deg, std::size_t i) { return sign[deg][i]; }, rename);
}

bool all_plus(const ChainMap& f) {
    for (auto [deg, n] : f.source().basis().dims())
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& e : f.component(deg).column(i))
                if (e.value != 1) return false;
    return true;
}

// The degreewise dual complex: (C^n)* in degree -n with d transposed.
ChainMap::Ptr dual_complex(const ChainComplex& c) {
    std::map<int, std::size_t> dims;
    for (auto [deg, n] : c.basis().dims()) dims[-deg] = n;
    auto names = c.basis();
    GradedBasis basis(dims, [names](int deg, std::size_t i) { return names.name(-deg, i); });
    std::map<int, SparseMatrix> d;
    for (auto [deg, n] : dims) {
        (void)n;
        if (c.basis().dims().count(-deg - 1)) d.emplace(deg, c.d(-deg - 1).transpose());
    }
    const auto w = c.window();
    return std::make_shared<const ChainComplex>(c.field(), basis, std::move(d), DegreeWindow{-w.hi, -w.lo});
}

void require_d2(const ChainComplex& c, const std::string& what) {
    auto v = find_d_squared_violation(c);
    INFO(what << (v ? " fails on " + v->element : std::string()));
    CHECK_FALSE(v.has_value());
}

std::map<int, std::size_t> stable_dims(const ChainComplex& c) {
    auto h = homology(c);
    std::map<int, std::size_t> out;
    for (int n : h.stable_degrees()) out[n] = h.dim(n);
    return out;
}

bool commutes(const ChainMap& f, const Operator& tau_source, const Operator& tau_target) {
    const auto lhs = compose(f, tau_source);
    const auto rhs = compose(tau_target, f);
    for (auto [deg, n] : f.source().basis().dims()) {
        (void)n;
        if (!(lhs.component(deg) == rhs.component(deg))) return false;
    }
    return true;
}

std::vector<std::pair<std::string, AInfAlgebra>> corpus() {
    return {{"ground_field", builtin_algebra({"ground_field", kP})},
            {"dual_numbers0", builtin_algebra({"dual_numbers", kP, 0})},
            {"dual_numbers1", builtin_algebra({"dual_numbers", kP, 1})},
            {"exterior", builtin_algebra({"exterior", kP, 1, 3, 2})},
            {"mu3_witness", builtin_algebra({"mu3_witness", kP})},
            {"gauge", testkit::gauge_algebra(kP, 6, 17)}};
}

std::vector<std::string> keys_of(const KeyedBasis& b) {
    std::vector<std::string> out;
    for (int deg : b.degrees())
        for (std::uint32_t i = 0; i < b.dim(deg); ++i) out.push_back(b.key(deg, i));
    return out;
}

}  // namespace

TEST_CASE("identity morphisms act as the identity") {
    auto q = hochschild_functor(builtin_algebra({"exterior", kP, 1, 3, 2}), 3);
    for (int n = 0; n <= 3; ++n) {
        Decorated id{CyclicMorphism::identity(n), std::vector<PlanarTree>(n + 1, PlanarTree::identity())};
        const auto& basis = q->object(n);
        for (const auto& k : keys_of(basis)) {
                Terms out;
                q->act(id, k, out);
                REQUIRE(out.size() == 1);
                CHECK(out[0].first == k);
                CHECK(out[0].second == 1);
            }
    }
}

TEST_CASE("the cyclic operator has order n+1") {
    auto q = hochschild_functor(builtin_algebra({"dual_numbers", kP, 1}), 3);
    const auto& F = q->field();
    for (int n = 0; n <= 3; ++n) {
        Decorated tau{CyclicMorphism::rotation(n, 1), std::vector<PlanarTree>(n + 1, PlanarTree::identity())};
        for (const auto& k : keys_of(q->object(n))) {
                Terms cur{{k, 1}};
                for (int i = 0; i <= n; ++i) {
                    Terms next;
                    for (const auto& [y, c] : cur) {
                        Terms tmp;
                        q->act(tau, y, tmp);
                        for (auto& [z, w] : tmp) next.emplace_back(z, F.mul(c, w));
                    }
                    cur = std::move(next);
                }
                collect(cur, F);
                REQUIRE(cur.size() == 1);
                CHECK(cur[0].first == k);
                CHECK(cur[0].second == 1);
            }
    }
}

TEST_CASE("module relations hold on generators") {
    for (const auto& [name, a] : corpus()) {
        auto q = hochschild_functor(a, 3);
        auto r = check_module_relations(*q, a.dim() > 3 ? 2 : 3);
        INFO(name << ": " << r.detail);
        CHECK(r.ok);
    }
    for (auto q : {constant_module(PrimeField(kP), 3), representable_module(1, 3, PrimeField(kP)),
                   representable_module(0, 3, PrimeField(kP), true)}) {
        auto r = check_module_relations(*q, 3);
        INFO(r.detail);
        CHECK(r.ok);
    }
}

TEST_CASE("cyclic bar complex of the Hochschild functor is the Hochschild complex") {
    for (const auto& [name, a] : corpus()) {
        const int L = a.dim() > 3 ? 2 : 3;
        auto q = hochschild_functor(a, L + 1);
        auto t = bar_totalization(*q, BarVariant::cyclic_bar, L);
        auto ref = hochschild_complex_with_tau(a, {L});
        auto f = basis_matching(t.complex, ref.complex, [](int, std::size_t) { return Scalar{1}; });
        INFO(name);
        REQUIRE(f.has_value());
        CHECK(verify_chain_map(*f).ok);
        CHECK(t.complex->window().lo == ref.complex->window().lo);
        CHECK(t.complex->window().hi == ref.complex->window().hi);
        REQUIRE(t.tau.has_value());
        CHECK(commutes(*f, *t.tau, ref.tau));
    }
}

TEST_CASE("the (u, e+) complex is the negative cyclic complex") {
    auto rename = [](const std::string& s) { return replace_all(replace_all(s, "·e⁺", "·ε"), "·u", "·t"); };
    for (const auto& [name, a] : corpus()) {
        const int L = a.dim() > 3 ? 2 : 3;
        auto q = hochschild_functor(a, L + 1);
        auto t = bar_totalization(*q, BarVariant::negative_cyclic, L, 2);
        auto ref = negative_cyclic_complex(a, {L}, 2);
        auto f = diagonal_match(t.complex, ref.complex(), rename);
        INFO(name);
        REQUIRE(f.has_value());
        CHECK(all_plus(*f));
        CHECK(verify_chain_map(*f).ok);
        CHECK(t.complex->window().lo == ref.complex()->window().lo);
        CHECK(t.complex->window().hi == ref.complex()->window().hi);
    }
}

TEST_CASE("p-fold bar complex matches the p-fold Hochschild complex up to a diagonal sign") {
    for (const auto& [name, a] : corpus()) {
        for (int p : {3, 5}) {
            const int L = p == 5 || a.dim() > 3 ? 1 : 2;
            auto q = restrict_along_j(hochschild_functor(a, L + p), p);
            auto t = bar_totalization(q, BarVariant::pfold, L);
            auto ref = pfold_complex(a, p, {L});
            REQUIRE(t.tau.has_value());
            auto f = diagonal_match(t.complex, ref.complex, {}, {{&*t.tau, &ref.tau}});
            INFO(name << " p=" << p);
            REQUIRE(f.has_value());
            CHECK(verify_chain_map(*f).ok);
            CHECK(commutes(*f, *t.tau, ref.tau));
        }
    }
}

TEST_CASE("Z/p-equivariant bar complex has the Hochschild Z/p homology") {
    const auto a = builtin_algebra({"dual_numbers", kP, 0});
    auto q = restrict_along_j(hochschild_functor(a, 5), 3);
    auto t = bar_totalization(q, BarVariant::zp_equivariant, 2, 2);
    auto ref = zp_equivariant_complex(a, 3, {2}, 2);
    CHECK(stable_dims(*t.complex) == stable_dims(*ref.complex()));
    CHECK_FALSE(stable_dims(*t.complex).empty());
}

TEST_CASE("constant module: bar acyclic, cyclic bar a point, negative cyclic k[u]") {
    auto q = constant_module(PrimeField(kP), 8);
    auto bar = bar_totalization(*q, BarVariant::bar, 6).complex;
    auto h = homology(*bar);
    CHECK_FALSE(h.stable_degrees().empty());
    for (int n : h.stable_degrees()) CHECK(h.dim(n) == 0);

    auto cyc = bar_totalization(*q, BarVariant::cyclic_bar, 6).complex;
    auto hc = homology(*cyc);
    CHECK_FALSE(hc.stable_degrees().empty());
    for (int n : hc.stable_degrees()) CHECK(hc.dim(n) == (n == 0 ? 1u : 0u));

    // HC^-(k) = k[u], |u| = 2, truncated at u^N.
    const int N = 3;
    auto neg = bar_totalization(*q, BarVariant::negative_cyclic, 6, N).complex;
    auto hn = homology(*neg);
    CHECK_FALSE(hn.stable_degrees().empty());
    for (int n : hn.stable_degrees()) CHECK(hn.dim(n) == (n >= 0 && n % 2 == 0 && n <= 2 * N ? 1u : 0u));
}

TEST_CASE("constant comodule: positive cyclic k[t~], Z/p-positive k[t~, theta~]") {
    const int N = 3;
    auto q = constant_comodule(PrimeField(kP), 8);
    auto pos = cobar_totalization(*q, CobarVariant::positive_cocyclic, 6, N);
    auto h = homology(*pos.complex);
    CHECK_FALSE(h.stable_degrees().empty());
    for (int n : h.stable_degrees()) CHECK(h.dim(n) == (n <= 0 && n % 2 == 0 && n >= -2 * N ? 1u : 0u));

    auto zp = cobar_totalization(restrict_along_j(q, 3), CobarVariant::zp_positive, 4, N);
    auto hz = homology(*zp.complex);
    CHECK_FALSE(hz.stable_degrees().empty());
    for (int n : hz.stable_degrees()) CHECK(hz.dim(n) == (n <= 0 && n >= -2 * N - 1 ? 1u : 0u));
}

TEST_CASE("cobar of the dual module is the dual of the bar complex") {
    for (const auto& [name, a] : corpus()) {
        const int L = a.dim() > 3 ? 2 : 3;
        auto q = hochschild_functor(a, L + 1);
        auto dq = dual_module(q);
        for (auto [bv, cv] : {std::pair{BarVariant::bar, CobarVariant::cobar},
                              std::pair{BarVariant::cyclic_bar, CobarVariant::cocyclic_cobar}}) {
            auto bar = bar_totalization(*q, bv, L).complex;
            auto cobar = cobar_totalization(*dq, cv, L).complex;
            auto unstar = [](const std::string& s) { return s.ends_with("*") ? s.substr(0, s.size() - 1) : s; };
            auto f = diagonal_match(cobar, dual_complex(*bar), unstar);
            INFO(name);
            REQUIRE(f.has_value());
            CHECK(verify_chain_map(*f).ok);
        }
    }
}

TEST_CASE("every totalization squares to zero") {
    for (const auto& [name, a] : corpus()) {
        auto q = hochschild_functor(a, 4);
        const std::string& n = name;
        for (auto v : {BarVariant::bar, BarVariant::cyclic_bar})
            require_d2(*bar_totalization(*q, v, 3).complex, n + " bar");
        require_d2(*bar_totalization(*q, BarVariant::negative_cyclic, 2, 2).complex, n + " negative cyclic");
        auto pq = restrict_along_j(q, 3);
        require_d2(*bar_totalization(pq, BarVariant::pfold, 1).complex, n + " pfold");
        require_d2(*bar_totalization(pq, BarVariant::zp_equivariant, 1, 2).complex, n + " zp");
        auto dq = dual_module(q);
        for (auto v : {CobarVariant::cobar, CobarVariant::cocyclic_cobar})
            require_d2(*cobar_totalization(*dq, v, 3).complex, n + " cobar");
        require_d2(*cobar_totalization(*dq, CobarVariant::positive_cocyclic, 2, 2).complex, n + " positive");
        auto pdq = restrict_along_j(dq, 3);
        require_d2(*cobar_totalization(pdq, CobarVariant::pfold_cocyclic, 1).complex, n + " pfold cocyclic");
        require_d2(*cobar_totalization(pdq, CobarVariant::zp_positive, 1, 2).complex, n + " zp positive");
    }
}

TEST_CASE("H-unitality") {
    auto verdict = [](const AInfAlgebra& a) { return h_unitality_check(*hochschild_functor(a, 6), 5).verdict; };
    CHECK(verdict(builtin_algebra({"ground_field", kP})) == HUnitality::h_unital);
    CHECK(verdict(builtin_algebra({"dual_numbers", kP, 0})) == HUnitality::h_unital);
    CHECK(verdict(builtin_algebra({"truncated_poly", kP, -2, 3})) == HUnitality::h_unital);
    // Cohomologically unital without a strict unit.
    const auto weak = testkit::gauge_transform(builtin_algebra({"exterior", kP, -1, 3, 2}), 6, 1, false);
    REQUIRE_FALSE(check_strict_unit(weak).ok);
    REQUIRE(check_cohomological_unit(weak).cohomologically_unital);
    CHECK(verdict(weak) == HUnitality::h_unital);
    // Elements of shifted degree 0 leave no degree stable.
    CHECK(verdict(testkit::gauge_algebra(kP, 6, 17)) == HUnitality::undetermined);
    CHECK(verdict(builtin_algebra({"zero_multiplication", kP, 0, 3, 1, {0}})) == HUnitality::not_h_unital);
    CHECK(to_string(HUnitality::h_unital) == "H-unital");
}

TEST_CASE("normalized splitting of the representable cyclic module") {
    for (int m = 0; m <= 2; ++m) {
        auto r = normalized_split_check(m, 4, PrimeField(kP));
        INFO("m=" << m << ": " << r.detail);
        CHECK(r.bijective);
        CHECK(r.differentials);
        CHECK(r.epsilon);
        CHECK(r.anticommute);
        CHECK(r.degenerate_acyclic);
        CHECK(r.projection_quasi_iso);
    }
    CHECK_THROWS_AS(normalized_split_check(4, 3, PrimeField(kP)), std::invalid_argument);
    CHECK_THROWS_AS(normalized_split_check(1, 6, PrimeField(kP)), std::invalid_argument);
}

TEST_CASE("total decalage preserves homology") {
    // Point and circle: the constant simplicial set and the cyclic set Lambda[0].
    const PrimeField F(kP);
    auto point = decalage_check(constant_module(F, 8), 3, 4);
    INFO(point.detail);
    CHECK(point.ok);
    for (int n = point.window.lo; n <= point.window.hi; ++n) CHECK(point.bar.dim(n) == (n == 0 ? 1u : 0u));
    auto circle = decalage_check(representable_module(0, 6, F), 3, 4);
    INFO(circle.detail);
    CHECK(circle.ok);
    for (int n = circle.window.lo; n <= circle.window.hi; ++n)
        CHECK(circle.bar.dim(n) == (n == 0 || n == -1 ? 1u : 0u));
    CHECK_FALSE(point.window.empty());
    CHECK_FALSE(circle.window.empty());
}

TEST_CASE("guards and variant errors") {
    const auto a = builtin_algebra({"dual_numbers", kP, 0});
    auto q = hochschild_functor(a, 3);
    CHECK_THROWS_AS(bar_totalization(*q, BarVariant::pfold, 2), std::invalid_argument);
    CHECK_THROWS_AS(bar_totalization(*q, BarVariant::cyclic_bar, 5), std::invalid_argument);
    CHECK_THROWS_AS(bar_totalization(restrict_along_j(q, 3), BarVariant::bar, 1), std::invalid_argument);
    CHECK_THROWS_AS(restrict_along_j(q, 2), std::invalid_argument);
    CHECK_THROWS_AS(cobar_totalization(*dual_module(q), CobarVariant::zp_positive, 1), std::invalid_argument);
    CHECK_THROWS_AS(hochschild_functor(testkit::gauge_algebra(kP, 4, 17), 20), std::invalid_argument);
    CHECK_THROWS_AS(decalage(q, 3), std::invalid_argument);
    CHECK_THROWS_AS(representable_module(0, 7, PrimeField(kP)), std::invalid_argument);
    CHECK_THROWS_AS(check_module_relations(*q, 4), std::invalid_argument);
}
