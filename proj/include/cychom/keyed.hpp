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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cychom/chain.hpp"

namespace cychom {

// A graded basis whose elements are identified by byte-string keys. All the
// word-like bases of the library (tensor words, p-words, series elements) are
// encoded this way so one builder serves every complex.
class KeyedBasis {
public:
    struct Location {
        int degree;
        std::uint32_t index;
    };

    explicit KeyedBasis(Grading grading = Grading::Z) : grading_(grading) {}
    KeyedBasis(const KeyedBasis&) = delete;
    KeyedBasis& operator=(const KeyedBasis&) = delete;

    Grading grading() const noexcept { return grading_; }
    int normalize(int degree) const noexcept { return grading_ == Grading::Z ? degree : ((degree % 2) + 2) % 2; }

    // Returns false if the key is already present.
    bool insert(int degree, std::string key);
    std::optional<Location> find(const std::string& key) const;
    const std::string& key(int degree, std::uint32_t index) const { return *keys_.at(degree).at(index); }
    std::size_t dim(int degree) const;
    std::map<int, std::size_t> dims() const;
    std::vector<int> degrees() const;
    std::size_t size() const noexcept { return index_.size(); }

private:
    Grading grading_;
    std::unordered_map<std::string, Location> index_;
    std::map<int, std::vector<const std::string*>> keys_;
};

using Term = std::pair<std::string, Scalar>;
using Terms = std::vector<Term>;
// Applies an operator to one basis key, appending (key, coefficient) terms.
using KeyOperator = std::function<void(const std::string& key, Terms& out)>;
using KeyNamer = std::function<std::string(const std::string& key)>;

GradedBasis graded_basis(std::shared_ptr<const KeyedBasis> basis, KeyNamer namer);

// Matrix components source^n -> target^{n+shift}. Emitted keys must lie in the
// target basis in the expected degree; otherwise std::logic_error, unless
// drop_missing is set, in which case keys absent from the target are ignored.
std::map<int, SparseMatrix> build_components(const PrimeField& field, const KeyedBasis& source, const KeyedBasis& target,
                                             int shift, const KeyOperator& op, bool drop_missing = false);

ChainComplex build_complex(const PrimeField& field, std::shared_ptr<const KeyedBasis> basis, const KeyOperator& d,
                           DegreeWindow window, KeyNamer namer, bool drop_missing = false);

// Applies op to a combination of keys.
Terms apply(const KeyOperator& op, const Terms& input, const PrimeField& field);
// Sorts by key, merges and drops zeros.
void collect(Terms& terms, const PrimeField& field);

}  // namespace cychom
