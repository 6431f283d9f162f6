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

// Shared helpers for the unit tests and the acceptance binary: independent
// oracles, random instance generators and small algebras with nonzero higher
// operations.

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "cychom/ainf.hpp"
#include "cychom/chain.hpp"

namespace testkit {

using cychom::PrimeField;
using cychom::Scalar;

using DenseMatrix = std::vector<std::vector<Scalar>>;  // row-major

// Textbook Gaussian elimination, deliberately unrelated to the library's
// sparse reduction.
std::size_t naive_rank(DenseMatrix a, const PrimeField& field);
DenseMatrix to_dense(const cychom::SparseMatrix& m);
DenseMatrix random_invertible(std::size_t n, const PrimeField& field, std::mt19937& rng);
DenseMatrix inverse(DenseMatrix a, const PrimeField& field);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, const PrimeField& field);
cychom::SparseMatrix to_sparse(const DenseMatrix& a, std::size_t cols);

// Homology dims of c by dense elimination, degree by degree.
std::map<int, std::size_t> naive_homology(const cychom::ChainComplex& c);

// A random complex with prescribed homology, disguised by random changes of
// basis. `pieces[deg]` counts k->k summands starting at deg; `free[deg]` counts
// one-dimensional summands with zero differential.
cychom::ChainComplex random_complex(const PrimeField& field, const std::map<int, int>& pieces,
                                    const std::map<int, int>& free, std::mt19937& rng);

// The Koszul dga k[x,e]/(x^2, e^2, xe+ex) with d x = e, |x| = 0, |e| = 1 and
// unit, pushed through the A-infinity isomorphism id + f2 for a random f2 of
// degree -1. The result has nonzero mu^1 .. mu^max_arity and is strictly
// unital when keep_unit is set.
cychom::AInfAlgebra gauge_algebra(std::uint32_t p, int max_arity, std::uint32_t seed, bool keep_unit = true);
// The same construction on any dga (operations of arity <= 2). keep_unit
// leaves every f2 term with a unit input at zero.
cychom::AInfAlgebra gauge_transform(const cychom::AInfAlgebra& dga, int max_arity, std::uint32_t seed,
                                    bool keep_unit = true);

// a with delta added to the coefficient of its which-th structure constant.
cychom::AInfAlgebra corrupt_entry(const cychom::AInfAlgebra& a, std::size_t which, Scalar delta);

// dims of HH of k[x]/x^m (|x| = 0) from the 2-periodic Koszul resolution,
// homological degree n in cohomological degree -n, for n <= top.
std::map<int, std::size_t> koszul_hh_truncated_poly(std::uint32_t p, int m, int top);

}  // namespace testkit
