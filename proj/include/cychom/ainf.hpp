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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cychom/chain.hpp"
#include "cychom/field.hpp"

namespace cychom {

using Elem = std::uint8_t;  // basis index; algebras have at most 255 basis elements

struct BasisElement {
    std::string name;
    int degree;
};

// One output term of a structure map: coefficient times a basis element.
struct OutTerm {
    Elem out;
    Scalar coeff;
};
using Output = std::vector<OutTerm>;

struct MuEntry {
    std::vector<Elem> inputs;
    Elem output;
    Scalar coeff;
};

// A finite-dimensional A-infinity algebra over F_p given by structure constants.
//
// Operations are stored in the unshifted convention: m_d has degree 2-d and the
// relations read
//   sum_{r+s+t=n} (-1)^{r+st} m_{r+1+t}(1^r (x) m_s (x) 1^t) = 0
// with Koszul signs from passing m_s over the first r inputs. Every complex is
// built from the shifted operations mu_d on A[1], related by
//   mu_d(a_1..a_d) = (-1)^{sum_i |a_i| (d-i)} m_d(a_1..a_d),
// for which all operations have degree +1 and the relations carry only the
// sign of the shifted degrees to the left of the inner operation.
class AInfAlgebra {
public:
    class Builder;

    const PrimeField& field() const noexcept { return field_; }
    std::size_t dim() const noexcept { return basis_.size(); }
    const std::vector<BasisElement>& basis() const noexcept { return basis_; }
    int degree(Elem e) const { return basis_.at(e).degree; }
    // ||x|| = |x| - 1
    int reduced_degree(Elem e) const { return basis_.at(e).degree - 1; }
    const std::string& name(Elem e) const { return basis_.at(e).name; }
    std::optional<Elem> index_of(const std::string& name) const;
    std::optional<Elem> unit() const noexcept { return unit_; }
    Grading grading() const noexcept { return grading_; }
    int arity_bound() const noexcept { return arity_bound_; }
    int max_degree() const;
    int min_degree() const;

    // Unshifted m_d; an empty output means zero.
    const Output& mu(std::span<const Elem> inputs) const;
    // Shifted mu_d.
    const Output& mu_shifted(std::span<const Elem> inputs) const;
    // Highest arity with a nonzero operation.
    int top_arity() const noexcept { return top_arity_; }

    std::vector<MuEntry> entries() const;

private:
    AInfAlgebra(PrimeField field) : field_(field) {}
    static std::string encode(std::span<const Elem> inputs) {
        return std::string(reinterpret_cast<const char*>(inputs.data()), inputs.size());
    }

    PrimeField field_;
    std::vector<BasisElement> basis_;
    std::optional<Elem> unit_;
    Grading grading_ = Grading::Z;
    int arity_bound_ = 6;
    int top_arity_ = 0;
    std::unordered_map<std::string, Output> mu_;
    std::unordered_map<std::string, Output> mu_shifted_;
};

class AInfAlgebra::Builder {
public:
    Builder(PrimeField field, std::vector<BasisElement> basis, Grading grading = Grading::Z, int arity_bound = 6);

    Builder& unit(const std::string& name);
    // Adds coeff * output to m_d(inputs); coefficients accumulate.
    Builder& mu(const std::vector<std::string>& inputs, const std::string& output, std::int64_t coeff);
    Builder& mu(std::vector<Elem> inputs, Elem output, Scalar coeff);

    // Checks degrees and strict unitality; throws std::invalid_argument.
    AInfAlgebra build() const;

private:
    Elem lookup(const std::string& name) const;

    PrimeField field_;
    std::vector<BasisElement> basis_;
    Grading grading_;
    int arity_bound_;
    std::optional<Elem> unit_;
    std::vector<MuEntry> entries_;
};

struct RelationReport {
    bool ok = true;
    int arity = 0;
    std::vector<Elem> inputs;
    std::string detail;
    explicit operator bool() const noexcept { return ok; }
};

// Checks every A-infinity relation with n <= d_max inputs on every basis tuple.
RelationReport check_ainf_relations(const AInfAlgebra& a, int d_max);

// Checks m_2(1,x) = m_2(x,1) = x and the vanishing of other operations on the unit.
RelationReport check_strict_unit(const AInfAlgebra& a);

// Homology of (A, m_1) and whether the unit class acts as the identity on it.
struct UnitalityReport {
    bool has_unit_class = false;
    bool cohomologically_unital = false;
    std::string detail;
};
UnitalityReport check_cohomological_unit(const AInfAlgebra& a);

struct BuiltinSpec {
    std::string name;
    std::uint32_t p = 3;
    int x_degree = 0;           // dual_numbers, truncated_poly; generator degree for exterior
    int m = 3;                  // truncated_poly: k[x]/x^m
    int generators = 1;         // exterior, zero_multiplication
    std::vector<int> degrees;   // zero_multiplication; defaults to all 1
};

// ground_field, zero_multiplication, dual_numbers, truncated_poly, exterior, mu3_witness.
AInfAlgebra builtin_algebra(const BuiltinSpec& spec);
std::vector<std::string> builtin_names();

// A with a new strict unit adjoined (named "1", or "1+" when "1" is taken).
// Throws when A already has a unit.
AInfAlgebra strict_unitalization(const AInfAlgebra& a);

// JSON description: {"p", "grading": "Z"|"Z2", "basis": [{"name","degree"}], "unit", "mu": [{"inputs","output","coeff"}]}.
AInfAlgebra algebra_from_json(const std::string& text);
std::string algebra_to_json(const AInfAlgebra& a);

}  // namespace cychom
