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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cychom/field.hpp"

namespace cychom {

struct Entry {
    std::uint32_t index;
    Scalar value;
    friend bool operator==(const Entry&, const Entry&) = default;
};

// Sorted by index, no zero values, no repeated indices.
using SparseVec = std::vector<Entry>;

// Sorts, merges repeated indices and drops zeros.
void canonicalize(SparseVec& v, const PrimeField& field);

// Column-compressed matrix over F_p.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols);  // zero matrix

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return start_.size() - 1; }
    std::size_t nnz() const noexcept { return entries_.size(); }
    bool is_zero() const noexcept { return entries_.empty(); }

    std::span<const Entry> column(std::size_t j) const {
        return {entries_.data() + start_[j], entries_.data() + start_[j + 1]};
    }

    // Appends a canonical column; rows are grown on demand only through set_rows.
    void push_column(std::span<const Entry> col);
    void set_rows(std::size_t rows) { rows_ = rows; }

    SparseMatrix transpose() const;
    Scalar at(std::size_t row, std::size_t col) const;

    friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::vector<std::size_t> start_{0};
    std::vector<Entry> entries_;
};

// a * b, where a.cols() == b.rows().
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b, const PrimeField& field);
SparseMatrix scale(const SparseMatrix& a, Scalar c, const PrimeField& field);
SparseMatrix subtract(const SparseMatrix& a, const SparseMatrix& b, const PrimeField& field);

// Exact rank by sparse column reduction.
std::size_t rank(const SparseMatrix& m, const PrimeField& field);

enum class Grading { Z, Z2 };

// Inclusive degree interval; empty when lo > hi.
struct DegreeWindow {
    int lo = 0;
    int hi = -1;
    bool empty() const noexcept { return lo > hi; }
    bool contains(int n) const noexcept { return lo <= n && n <= hi; }
    static DegreeWindow none() noexcept { return {}; }
    friend bool operator==(const DegreeWindow&, const DegreeWindow&) = default;
};

class GradedBasis {
public:
    using Namer = std::function<std::string(int degree, std::size_t index)>;

    GradedBasis() = default;
    explicit GradedBasis(std::map<int, std::size_t> dims, Namer namer = {});
    // Named basis; names must be unique within a degree.
    static GradedBasis from_names(const std::map<int, std::vector<std::string>>& names);

    std::size_t dim(int degree) const;
    const std::map<int, std::size_t>& dims() const noexcept { return dims_; }
    std::size_t total() const;
    std::string name(int degree, std::size_t index) const;
    std::optional<int> min_degree() const;
    std::optional<int> max_degree() const;

private:
    std::map<int, std::size_t> dims_;
    std::shared_ptr<const Namer> namer_;
};

// A cochain complex: d has degree +1. In Z/2 mode degrees live in {0, 1}.
class ChainComplex {
public:
    ChainComplex(PrimeField field, GradedBasis basis, std::map<int, SparseMatrix> d, DegreeWindow window,
                 Grading grading = Grading::Z);

    const PrimeField& field() const noexcept { return field_; }
    const GradedBasis& basis() const noexcept { return basis_; }
    Grading grading() const noexcept { return grading_; }
    // Degrees whose homology is unaffected by truncation.
    DegreeWindow window() const noexcept { return window_; }

    int shift(int n, int k) const noexcept;
    int next(int n) const noexcept { return shift(n, 1); }
    int prev(int n) const noexcept { return shift(n, -1); }

    std::size_t dim(int n) const { return basis_.dim(n); }
    // C^n -> C^{next(n)}; a correctly shaped zero matrix when n has no support.
    const SparseMatrix& d(int n) const;

    ChainComplex with_window(DegreeWindow w) const;

private:
    PrimeField field_;
    GradedBasis basis_;
    std::map<int, SparseMatrix> d_;
    DegreeWindow window_;
    Grading grading_;
};

struct Violation {
    int degree = 0;
    std::size_t index = 0;
    std::string element;
    std::string what;
};

class SignConventionError : public std::runtime_error {
public:
    explicit SignConventionError(Violation v);
    const Violation& violation() const noexcept { return v_; }

private:
    Violation v_;
};

// First basis element x with d(d(x)) != 0 among degrees in `range` (all degrees if empty).
std::optional<Violation> find_d_squared_violation(const ChainComplex& c, DegreeWindow range = {});

struct DegreeHomology {
    int degree;
    std::size_t dim;
    bool stable;
};

struct HomologyReport {
    std::vector<DegreeHomology> rows;  // ascending degree

    std::size_t dim(int n) const;
    bool stable(int n) const;
    std::vector<int> stable_degrees() const;
};

// Reports degrees in `range`; an empty range means the support of c plus its window.
// Throws SignConventionError when d^2 != 0 near the reported degrees.
HomologyReport homology(const ChainComplex& c, DegreeWindow range = {});

class ChainMap {
public:
    using Ptr = std::shared_ptr<const ChainComplex>;

    ChainMap(Ptr source, Ptr target, int shift, std::map<int, SparseMatrix> components);
    static ChainMap identity(Ptr c);
    static ChainMap zero(Ptr source, Ptr target, int shift = 0);

    const ChainComplex& source() const noexcept { return *source_; }
    const ChainComplex& target() const noexcept { return *target_; }
    Ptr source_ptr() const noexcept { return source_; }
    Ptr target_ptr() const noexcept { return target_; }
    int shift() const noexcept { return shift_; }
    // source^n -> target^{n+shift}
    const SparseMatrix& component(int n) const;

private:
    Ptr source_, target_;
    int shift_;
    std::map<int, SparseMatrix> f_;
};

// g o f
ChainMap compose(const ChainMap& g, const ChainMap& f);

struct CheckReport {
    bool ok = true;
    std::string detail;
    std::optional<Violation> witness;
    explicit operator bool() const noexcept { return ok; }
};

enum class MapCheck { chain_map, quasi_iso };

// chain_map: d f = (-1)^shift f d on every basis element.
// quasi_iso: additionally the mapping cone is acyclic on its stable degrees
// (on every degree when no degree is stable).
CheckReport verify_chain_map(const ChainMap& f, MapCheck mode = MapCheck::chain_map);

// cone^n = source^{n+1} + target^{n+shift}, d(a, b) = (-da, f a + (-1)^shift db).
ChainComplex mapping_cone(const ChainMap& f);

// Rank of the induced map H^n(source) -> H^{n+shift}(target). Dense; meant for small degrees.
std::size_t induced_rank(const ChainMap& f, int n);

// Number of worker threads: CYCHOM_THREADS if set, else hardware concurrency.
unsigned worker_threads();

}  // namespace cychom
