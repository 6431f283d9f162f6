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

#include <memory>
#include <optional>
#include <string>

#include "cychom/ainf.hpp"
#include "cychom/chain.hpp"
#include "cychom/keyed.hpp"
#include "cychom/series.hpp"

namespace cychom {

// Truncation shared by every Hochschild-type complex. Words have at most L+1
// slots (p-words: total block length at most L); the differential never
// lengthens a word, so this is a subcomplex. With a degree floor only total
// degrees >= floor are built, which is again a subcomplex; degree floor itself
// is then untrusted.
struct WordTruncation {
    int L = 4;
    std::optional<int> floor;
};

// Word keys: one byte per slot, the algebra basis index with the top bit set on
// distinguished (bimodule) slots. Names print slots separated by '|', with
// distinguished slots in brackets.
std::string word_name(const AInfAlgebra& a, const std::string& slots);
// Degree of a cyclic word a_0|a_1|...|a_n: |a_0| + sum ||a_i||.
int word_degree(const AInfAlgebra& a, const std::string& slots);

// CC(A) with the Hochschild differential b.
ChainMap::Ptr hochschild_complex(const AInfAlgebra& a, WordTruncation tr);
// The same words with the bar differential b' (no wrapped-around terms).
ChainMap::Ptr bar_complex(const AInfAlgebra& a, WordTruncation tr);

struct CyclicWordComplex {
    ChainMap::Ptr complex;
    // Connes' cyclic operator: the last slot moves to the front with the Koszul
    // sign of the unshifted degrees, times (-1)^n on n+1 slots.
    Operator tau;
};
CyclicWordComplex hochschild_complex_with_tau(const AInfAlgebra& a, WordTruncation tr);

struct PFoldComplex {
    int p = 3;
    ChainMap::Ptr complex;
    // Rotation of the last block to the front, Koszul sign computed with
    // |x| on distinguished slots and ||x|| elsewhere.
    Operator tau;
};
PFoldComplex pfold_complex(const AInfAlgebra& a, int p, WordTruncation tr);

struct NonUnitalComplex {
    ChainMap::Ptr cc;
    ChainMap::Ptr complex;  // CC(A) + CC(A)·ε, |w·ε| = |w| - 1
    Operator connes;        // B^nu, degree -1
    ChainMap inclusion;     // CC(A) -> CC^nu(A)
};
NonUnitalComplex nonunital_complex(const AInfAlgebra& a, WordTruncation tr);

// CC^nu(A)[t]/t^{N+1} with differential b^nu + t B^nu.
SeriesComplex negative_cyclic_complex(const AInfAlgebra& a, WordTruncation tr, int N);
SeriesComplex negative_cyclic_complex(const NonUnitalComplex& nu, int N, DegreeWindow window, std::optional<int> floor);

// pCC(A)[t, theta]/t^{N+1} with
//   x t^k      -> b x t^k + (-1)^{|x|} (tau - 1) x t^k theta
//   x t^k theta -> b x t^k theta + (-1)^{|x|} N x t^{k+1}.
SeriesComplex zp_equivariant_complex(const AInfAlgebra& a, int p, WordTruncation tr, int N);
SeriesComplex zp_equivariant_complex(const PFoldComplex& pf, int N, DegreeWindow window, std::optional<int> floor);

struct TThetaOperators {
    SeriesComplex complex;
    ChainMap t_action;      // degree 2
    ChainMap theta_action;  // degree 1, anticommutes with d
};
// t acts by multiplication. Theta(x t^k) = (-1)^{|x|} x t^k theta and
// Theta(x t^k theta) = -(-1)^{|x|} (tau - 1)^{p-2} x t^{k+1}.
TThetaOperators t_theta_operators(const AInfAlgebra& a, int p, WordTruncation tr, int N);

// Stable windows. Words excluded by the length bound all have degree <= q, so
// total degrees >= q + 2N + |theta| + 2 are unaffected by it; none when some
// basis element has reduced degree >= 0 (then arbitrarily long words share a degree).
DegreeWindow hochschild_window(const AInfAlgebra& a, const ChainComplex& c, WordTruncation tr);
DegreeWindow pfold_window(const AInfAlgebra& a, int p, const ChainComplex& c, WordTruncation tr);
DegreeWindow series_window(std::optional<int> excluded_top, const SeriesShape& shape, const ChainComplex& total,
                           std::optional<int> floor);
// Top degree of a word excluded by the length bound, if bounded.
std::optional<int> excluded_top_cc(const AInfAlgebra& a, int L);
std::optional<int> excluded_top_pfold(const AInfAlgebra& a, int p, int L);

}  // namespace cychom
