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

#include "cychom/keyed.hpp"

#include <algorithm>
#include <stdexcept>

#include "cychom/parallel.hpp"

namespace cychom {

bool KeyedBasis::insert(int degree, std::string key) {
    degree = normalize(degree);
    auto& list = keys_[degree];
    auto [it, fresh] = index_.try_emplace(std::move(key), Location{degree, static_cast<std::uint32_t>(list.size())});
    if (fresh) list.push_back(&it->first);
    return fresh;
}

std::optional<KeyedBasis::Location> KeyedBasis::find(const std::string& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t KeyedBasis::dim(int degree) const {
    auto it = keys_.find(normalize(degree));
    return it == keys_.end() ? 0 : it->second.size();
}

std::map<int, std::size_t> KeyedBasis::dims() const {
    std::map<int, std::size_t> out;
    for (const auto& [deg, list] : keys_)
        if (!list.empty()) out[deg] = list.size();
    return out;
}

std::vector<int> KeyedBasis::degrees() const {
    std::vector<int> out;
    for (const auto& [deg, list] : keys_)
        if (!list.empty()) out.push_back(deg);
    return out;
}

GradedBasis graded_basis(std::shared_ptr<const KeyedBasis> basis, KeyNamer namer) {
    auto dims = basis->dims();
    return GradedBasis(dims, [basis, namer](int deg, std::size_t i) {
        return namer(basis->key(deg, static_cast<std::uint32_t>(i)));
    });
}

std::map<int, SparseMatrix> build_components(const PrimeField& field, const KeyedBasis& source, const KeyedBasis& target,
                                             int shift, const KeyOperator& op, bool drop_missing) {
    auto degrees = source.degrees();
    std::vector<SparseMatrix> mats(degrees.size());
    parallel_for(degrees.size(), [&](std::size_t di) {
        int deg = degrees[di];
        int out = target.normalize(deg + shift);
        SparseMatrix m(target.dim(out), 0);
        Terms terms;
        SparseVec col;
        std::size_t n = source.dim(deg);
        for (std::uint32_t j = 0; j < n; ++j) {
            terms.clear();
            col.clear();
            const auto& key = source.key(deg, j);
            op(key, terms);
            for (const auto& [k, c] : terms) {
                if (c == 0) continue;
                auto loc = target.find(k);
                if (!loc) {
                    if (drop_missing) continue;
                    throw std::logic_error("operator left the truncated basis from degree " + std::to_string(deg));
                }
                if (loc->degree != out)
                    throw std::logic_error("operator has wrong degree: " + std::to_string(deg) + " -> " +
                                           std::to_string(loc->degree) + ", expected " + std::to_string(out));
                col.push_back({loc->index, c});
            }
            canonicalize(col, field);
            m.push_column(col);
        }
        mats[di] = std::move(m);
    });
    std::map<int, SparseMatrix> result;
    for (std::size_t i = 0; i < degrees.size(); ++i) result.emplace(degrees[i], std::move(mats[i]));
    return result;
}

ChainComplex build_complex(const PrimeField& field, std::shared_ptr<const KeyedBasis> basis, const KeyOperator& d,
                           DegreeWindow window, KeyNamer namer, bool drop_missing) {
    auto comps = build_components(field, *basis, *basis, 1, d, drop_missing);
    auto gb = graded_basis(basis, std::move(namer));
    return ChainComplex(field, std::move(gb), std::move(comps), window, basis->grading());
}

void collect(Terms& terms, const PrimeField& field) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms.size();) {
        std::size_t j = i;
        Scalar acc = 0;
        for (; j < terms.size() && terms[j].first == terms[i].first; ++j) acc = field.add(acc, terms[j].second);
        if (acc != 0) {
            if (out != i) terms[out].first = std::move(terms[i].first);
            terms[out].second = acc;
            ++out;
        }
        i = j;
    }
    terms.resize(out);
}

Terms apply(const KeyOperator& op, const Terms& input, const PrimeField& field) {
    Terms out, tmp;
    for (const auto& [k, c] : input) {
        tmp.clear();
        op(k, tmp);
        for (auto& [k2, c2] : tmp) out.emplace_back(std::move(k2), field.mul(c, c2));
    }
    collect(out, field);
    return out;
}

}  // namespace cychom
