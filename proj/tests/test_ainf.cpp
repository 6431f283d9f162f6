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

#include "cychom/ainf.hpp"
#include "doctest.h"
#include "testkit.hpp"

using namespace cychom;

TEST_CASE("builtins satisfy the relations") {
    for (auto name : builtin_names()) {
        CAPTURE(name);
        for (std::uint32_t p : {3u, 5u}) {
            BuiltinSpec spec{name, p};
            if (name == "exterior") {
                spec.generators = 2;
                spec.x_degree = 1;
            }
            auto a = builtin_algebra(spec);
            CHECK(check_ainf_relations(a, 4));
        }
    }
}

TEST_CASE("gauge-transformed algebras satisfy the relations and have higher operations") {
    for (std::uint32_t seed = 1; seed <= 4; ++seed) {
        auto a = testkit::gauge_algebra(3, 5, seed);
        CHECK(check_ainf_relations(a, 5));
        CHECK(a.top_arity() >= 3);
        CHECK(check_strict_unit(a));
        auto b = testkit::gauge_algebra(5, 5, seed, false);
        CHECK(check_ainf_relations(b, 5));
    }
}

TEST_CASE("a perturbed product breaks the relations") {
    AInfAlgebra::Builder b(PrimeField(3), {{"1", 0}, {"x", 0}});
    b.unit("1").mu({"1", "1"}, "1", 1).mu({"1", "x"}, "x", 1).mu({"x", "1"}, "x", 1).mu({"x", "x"}, "x", 1);
    CHECK(check_ainf_relations(b.build(), 3));
    // Non-associative: (xx)x = yx = x but x(xx) = xy = 0.
    AInfAlgebra::Builder c(PrimeField(3), {{"x", 0}, {"y", 0}});
    c.mu({"x", "x"}, "y", 1).mu({"y", "x"}, "x", 1);
    auto r = check_ainf_relations(c.build(), 3);
    CHECK_FALSE(r.ok);
    CHECK(r.arity == 3);
}

TEST_CASE("degree mismatches are rejected") {
    AInfAlgebra::Builder b(PrimeField(3), {{"a", 0}, {"b", 1}});
    b.mu({"a", "a"}, "b", 1);
    CHECK_THROWS_AS(b.build(), std::invalid_argument);
}

TEST_CASE("mu3 witness is an A-infinity algebra without unit") {
    auto a = builtin_algebra({"mu3_witness", 3});
    CHECK(check_ainf_relations(a, 5));
    CHECK_FALSE(a.unit().has_value());
    CHECK(a.top_arity() == 3);
    auto u = check_cohomological_unit(a);
    CHECK_FALSE(u.cohomologically_unital);
}

TEST_CASE("cohomological unit of the gauge algebra") {
    auto a = testkit::gauge_algebra(3, 4, 9, false);
    auto u = check_cohomological_unit(a);
    CHECK(u.cohomologically_unital);
    CHECK(check_cohomological_unit(builtin_algebra({"dual_numbers", 3})).cohomologically_unital);
    CHECK_FALSE(check_cohomological_unit(builtin_algebra({"zero_multiplication", 3})).cohomologically_unital);
}

TEST_CASE("shifted operations differ from unshifted by the Koszul sign") {
    auto a = builtin_algebra({"exterior", 5, 1, 3, 2});
    // y1 * y2 with |y1| = |y2| = 1: sign (-1)^{|y1|} = -1.
    auto y1 = *a.index_of("y1"), y2 = *a.index_of("y2");
    std::vector<Elem> in{y1, y2};
    REQUIRE(a.mu(in).size() == 1);
    CHECK(a.mu_shifted(in)[0].coeff == a.field().neg(a.mu(in)[0].coeff));
}

TEST_CASE("json round trip") {
    auto a = testkit::gauge_algebra(3, 4, 2);
    auto text = algebra_to_json(a);
    auto b = algebra_from_json(text);
    CHECK(algebra_to_json(b) == text);
    CHECK(check_ainf_relations(b, 4));
    CHECK_THROWS_AS(algebra_from_json("{\"p\": 4, \"basis\": []}"), std::invalid_argument);
    CHECK_THROWS_AS(algebra_from_json("not json"), std::invalid_argument);
}

TEST_CASE("strict unitalization adds a unit and keeps the relations") {
    auto a = builtin_algebra({"mu3_witness", 3});
    auto u = strict_unitalization(a);
    CHECK(u.dim() == 3);
    REQUIRE(u.unit().has_value());
    CHECK(u.name(*u.unit()) == "1");
    CHECK(check_ainf_relations(u, 5).ok);
    CHECK(check_strict_unit(u).ok);
    CHECK(check_cohomological_unit(u).cohomologically_unital);
    CHECK_THROWS_AS(strict_unitalization(builtin_algebra({"ground_field", 3})), std::invalid_argument);
}
