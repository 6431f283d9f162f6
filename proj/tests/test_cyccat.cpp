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
#include <set>

#include "cychom/cyccat.hpp"
#include "doctest.h"

using namespace cychom;

namespace {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::vector<std::vector<long long>> row(n + 1, std::vector<long long>(n + 1, 0));
    for (int i = 0; i <= n; ++i) {
        row[i][0] = 1;
        for (int j = 1; j <= i; ++j) row[i][j] = row[i - 1][j - 1] + (j <= i - 1 ? row[i - 1][j] : 0);
    }
    return row[n][k];
}

// Residues of the marked points, the part of a morphism visible on the circle.
std::vector<int> point_map(const CyclicMorphism& f) {
    std::vector<int> v;
    for (int i = 0; i <= f.source(); ++i) v.push_back(cyclic_set_action(f, i));
    return v;
}

}  // namespace

TEST_CASE("hom-set sizes match the closed formula and both encodings agree") {
    for (int n = 0; n <= 4; ++n)
        for (int m = 0; m <= 4; ++m) {
            auto lifts = enumerate_hom(n, m);
            CHECK(static_cast<long long>(lifts.size()) == (n + 1) * binomial(n + m + 1, m));
            CHECK(static_cast<long long>(lifts.size()) == (m + 1) * binomial(n + m + 1, m + 1));
            CHECK(lifts == enumerate_hom_by_blocks(n, m));
            CHECK(enumerate_hom(n, m, true) == enumerate_hom_by_blocks(n, m, true));
            CHECK(std::set(lifts.begin(), lifts.end()).size() == lifts.size());
            for (const auto& f : lifts) CHECK(CyclicMorphism::from_blocks(f.rotation_index(), f.blocks()) == f);
        }
}

TEST_CASE("small hom-sets") {
    CHECK(enumerate_hom(0, 1, true).empty());
    CHECK(enumerate_hom(1, 0).size() == 2);
    for (int n = 0; n <= 5; ++n) {
        auto all = enumerate_hom(n, n);
        const auto autos = std::count_if(all.begin(), all.end(), [](const auto& f) { return f.is_automorphism(); });
        CHECK(autos == n + 1);
        for (int k = 0; k <= n; ++k) CHECK(CyclicMorphism::rotation(n, k).is_automorphism());
    }
    // Arrow variant: surjections of marked points with a rotation.
    for (int n = 0; n <= 4; ++n)
        for (int m = 0; m <= n; ++m)
            CHECK(static_cast<long long>(enumerate_hom(n, m, true).size()) == (n + 1) * binomial(n, m));
}

TEST_CASE("spec encoding examples") {
    // [2]_1 = 1,2,0 cut into blocks (1)(2,0): block sizes 1 and 2.
    auto f = CyclicMorphism::from_blocks(1, {1, 2});
    CHECK(point_map(f) == std::vector<int>{1, 0, 1});
    CHECK(f.rotation_index() == 1);
    CHECK(f.blocks() == std::vector<int>{1, 2});
    auto tau = CyclicMorphism::rotation(2, 1);
    CHECK(point_map(tau) == std::vector<int>{1, 2, 0});
    CHECK(compose(tau, compose(tau, tau)) == CyclicMorphism::identity(2));
}

TEST_CASE("composition is associative and unital, exhaustively on small objects") {
    std::vector<std::vector<std::vector<CyclicMorphism>>> hom(4, std::vector<std::vector<CyclicMorphism>>(4));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) hom[a][b] = enumerate_hom(a, b);
    std::size_t triples = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c)
                for (int d = 0; d < 3; ++d)
                    for (const auto& f : hom[a][b])
                        for (const auto& g : hom[b][c])
                            for (const auto& h : hom[c][d]) {
                                ++triples;
                                REQUIRE(compose(h, compose(g, f)) == compose(compose(h, g), f));
                            }
    CHECK(triples > 10000);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            for (const auto& f : hom[a][b]) {
                CHECK(compose(CyclicMorphism::identity(b), f) == f);
                CHECK(compose(f, CyclicMorphism::identity(a)) == f);
                // Composition is compatible with the action on marked points.
                for (int c = 0; c < 3; ++c)
                    for (const auto& g : hom[b][c]) {
                        auto gf = compose(g, f);
                        for (int i = 0; i <= a; ++i)
                            CHECK(cyclic_set_action(gf, i) == cyclic_set_action(g, cyclic_set_action(f, i)));
                    }
            }
}

TEST_CASE("rotation on the target gives a unique decomposition") {
    for (int n = 0; n <= 4; ++n)
        for (int m = 0; m <= 4; ++m) {
            auto all = enumerate_hom(n, m);
            auto simplicial = enumerate_simplicial_hom(n, m);
            CHECK(static_cast<long long>(simplicial.size()) == binomial(n + m + 1, m + 1));
            CHECK(all.size() == static_cast<std::size_t>(m + 1) * simplicial.size());
            std::set<std::pair<int, CyclicMorphism>> seen;
            for (const auto& f : all) {
                auto [k, g] = decompose(f);
                CHECK(g.preserves_basepoint());
                CHECK(compose(CyclicMorphism::rotation(m, k), g) == f);
                seen.insert({k, g});
            }
            CHECK(seen.size() == all.size());
        }
}

TEST_CASE("rotation on the source fails for non-surjective or fat-fibred maps") {
    // Constant map [1] -> [1]: no point goes to 0 after rotating the source.
    auto constant = CyclicMorphism({1, 1}, 1);
    CHECK(all_decompositions(constant, RotationSide::source).empty());
    CHECK_THROWS_AS(decompose(constant, RotationSide::source), std::domain_error);
    // Both points of [1] go to 0: two source rotations work.
    auto fat = CyclicMorphism({0, 0}, 0);
    CHECK(all_decompositions(fat, RotationSide::source).size() == 2);
    // It does exist and is unique for automorphisms.
    for (int n = 0; n <= 4; ++n)
        for (int k = 0; k <= n; ++k)
            CHECK(decompose(CyclicMorphism::rotation(n, k), RotationSide::source).k == k);
}

TEST_CASE("Joyal duality is a contravariant bijection") {
    for (int n = 0; n <= 3; ++n)
        for (int m = 0; m <= 3; ++m)
            for (const auto& f : enumerate_simplicial_hom(n, m)) {
                auto phi = joyal_dual(f);
                CHECK(phi.source == m);
                CHECK(phi.target == n);
                CHECK(joyal_dual(phi) == f);
                for (int l = 0; l <= 3; ++l)
                    for (const auto& g : enumerate_simplicial_hom(m, l))
                        CHECK(joyal_dual(compose(g, f)) == compose(joyal_dual(f), joyal_dual(g)));
            }
}

TEST_CASE("p-cyclic hom-sets: closed under composition, filtered from Lambda") {
    for (int p : {2, 3}) {
        for (int s = 0; s <= 2; ++s)
            for (int t = 0; t <= 2; ++t)
                for (const auto& k : pobjects_of_total(p, s))
                    for (const auto& kp : pobjects_of_total(p, t)) {
                        auto direct = enumerate_phom(k, kp);
                        std::vector<PCyclicMorphism> filtered;
                        for (const auto& f : enumerate_hom(functor_j(k), functor_j(kp)))
                            if (auto g = PCyclicMorphism::make(k, kp, f)) filtered.push_back(*g);
                        std::sort(filtered.begin(), filtered.end());
                        CHECK(direct == filtered);
                        auto arrows = enumerate_phom(k, kp, true);
                        for (const auto& f : direct)
                            CHECK((std::find(arrows.begin(), arrows.end(), f) != arrows.end()) ==
                                  f.underlying().surjective());
                        for (const auto& f : direct) {
                            auto [r, g] = decompose(f);
                            CHECK(g.is_multisimplicial());
                            PCyclicMorphism tr = PCyclicMorphism::identity(g.target());
                            for (int i = 0; i < r; ++i) tr = compose(PCyclicMorphism::block_rotation(tr.target()), tr);
                            CHECK(compose(tr, g) == f);
                        }
                    }
        for (int s = 0; s <= 3; ++s) {
            for (const auto& k : pobjects_of_total(p, s)) {
                PCyclicMorphism tau = PCyclicMorphism::identity(k);
                for (int i = 0; i < p; ++i) tau = compose(PCyclicMorphism::block_rotation(tau.target()), tau);
                CHECK(tau == PCyclicMorphism::identity(k));
            }
        }
    }
    // Associativity on a few objects.
    const int p = 3;
    PObject a{1, 0, 0}, b{0, 1, 1}, c{1, 0, 1}, d{0, 0, 1};
    for (const auto& f : enumerate_phom(a, b))
        for (const auto& g : enumerate_phom(b, c))
            for (const auto& h : enumerate_phom(c, d)) REQUIRE(compose(h, compose(g, f)) == compose(compose(h, g), f));
    CHECK(enumerate_phom(PObject(p, 0), PObject(p, 0)).size() == static_cast<std::size_t>(p));
}

TEST_CASE("the square j o i_p = i o o commutes and both paths are functorial") {
    for (int p : {2, 3}) {
        std::size_t checked = 0;
        for (int s = 0; s <= 3; ++s)
            for (int t = 0; t <= 3 - s; ++t)
                for (const auto& k : pobjects_of_total(p, s))
                    for (const auto& kp : pobjects_of_total(p, t))
                        for (const auto& parts : enumerate_multisimplicial_hom(k, kp)) {
                            ++checked;
                            auto top = functor_j(functor_ip(parts));
                            auto bottom = functor_i(functor_o(parts));
                            REQUIRE(top == bottom);
                            CHECK(top.source() == functor_o(k));
                            CHECK(top.target() == functor_j(kp));
                        }
        CHECK(checked > 100);
        // Functoriality of o through the composite of tuples.
        PObject a(p, 1), b(p, 0), c(p, 2);
        for (const auto& f : enumerate_multisimplicial_hom(a, b))
            for (const auto& g : enumerate_multisimplicial_hom(b, c)) {
                std::vector<CyclicMorphism> gf;
                for (int i = 0; i < p; ++i) gf.push_back(compose(g[i], f[i]));
                CHECK(functor_o(gf) == compose(functor_o(g), functor_o(f)));
                CHECK(functor_ip(gf) == compose(functor_ip(g), functor_ip(f)));
            }
    }
}

TEST_CASE("the cyclic set C = Z/(n+1) is a functor on Lambda") {
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b)
            for (const auto& f : enumerate_hom(a, b))
                for (int c = 0; c <= 2; ++c)
                    for (const auto& g : enumerate_hom(b, c))
                        for (int x = 0; x <= a; ++x)
                            CHECK(cyclic_set_action(compose(g, f), x) ==
                                  cyclic_set_action(g, cyclic_set_action(f, x)));
    CHECK(cyclic_set_action(CyclicMorphism::rotation(3, 1), 3) == 0);
}

TEST_CASE("j*C has 2p nondegenerate cells, p of dimension 0 and one per block direction") {
    for (int p : {2, 3, 5}) {
        auto cells = jstar_cell_count(p, p == 3 ? 3 : 2);
        CHECK(cells.total() == static_cast<std::size_t>(2 * p));
        REQUIRE(cells.nondegenerate.count(PObject(p, 0)) == 1);
        CHECK(cells.nondegenerate.at(PObject(p, 0)).size() == static_cast<std::size_t>(p));
        long long euler = 0;
        for (const auto& [k, xs] : cells.nondegenerate) {
            int deg = 0;
            for (int v : k) deg += v;
            CHECK(deg <= 1);
            euler += (deg % 2 ? -1 : 1) * static_cast<long long>(xs.size());
            if (deg == 1) {
                CHECK(xs.size() == 1);
                // The one non-distinguished point of the object.
                auto dist = distinguished_points(k);
                CHECK(std::find(dist.begin(), dist.end(), xs[0]) == dist.end());
            }
        }
        CHECK(euler == 0);  // a circle
    }
    auto cells = jstar_cell_count(3, 2);
    for (const auto& [k, xs] : cells.nondegenerate) CHECK(k[0] + k[1] + k[2] <= 1);
}

TEST_CASE("the p-cyclic bicomplex resolves k") {
    for (int s = 0; s <= 2; ++s)
        for (const auto& k : pobjects_of_total(3, s)) {
            auto rep = plambda_resolution_check(3, k, 3);
            INFO(rep.detail);
            CHECK(rep.ok);
            CHECK(!find_d_squared_violation(*rep.total).has_value());
        }
    auto rep5 = plambda_resolution_check(5, {1, 0, 0, 0, 0}, 2);
    INFO(rep5.detail);
    CHECK(rep5.ok);
}

TEST_CASE("column zero restricted to multisimplicial maps is contractible") {
    for (int p : {3, 5})
        for (int s = 0; s <= 2; ++s)
            for (const auto& k : pobjects_of_total(p, s)) {
                auto rep = multisimplicial_vertical_check(p, k, p == 3 ? 4 : 3);
                INFO(rep.detail);
                CHECK(rep.ok);
            }
}

TEST_CASE("each row is a free k[Z/p]-module tensored with the periodic complex") {
    for (int row = 0; row <= 3; ++row)
        for (const auto& k : pobjects_of_total(3, 1)) {
            auto rep = horizontal_row_check(3, k, row, 4);
            INFO(rep.detail);
            CHECK(rep.ok);
        }
}

TEST_CASE("size guards and malformed input") {
    CHECK_THROWS_AS(enumerate_hom(7, 0), std::out_of_range);
    CHECK_THROWS_AS(CyclicMorphism({2, 1}, 3), std::invalid_argument);
    CHECK_THROWS_AS(CyclicMorphism({4}, 3), std::invalid_argument);
    CHECK_THROWS_AS(CyclicMorphism({0, 5}, 3), std::invalid_argument);
    CHECK_THROWS_AS(functor_i(CyclicMorphism::rotation(2, 1)), std::invalid_argument);
    CHECK_THROWS_AS(plambda_resolution_check(3, {1, 0}, 2), std::invalid_argument);
}
