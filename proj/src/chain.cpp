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

#include "cychom/chain.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <queue>
#include <set>
#include <thread>
#include <unordered_set>

#include "cychom/parallel.hpp"

namespace cychom {

void canonicalize(SparseVec& v, const PrimeField& field) {
    std::sort(v.begin(), v.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < v.size();) {
        auto idx = v[i].index;
        Scalar acc = 0;
        for (; i < v.size() && v[i].index == idx; ++i) acc = field.add(acc, v[i].value);
        if (acc != 0) v[out++] = {idx, acc};
    }
    v.resize(out);
}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), start_(cols + 1, 0) {}

void SparseMatrix::push_column(std::span<const Entry> col) {
    for (const auto& e : col)
        if (e.index >= rows_) throw std::out_of_range("SparseMatrix: row index out of range");
    entries_.insert(entries_.end(), col.begin(), col.end());
    start_.push_back(entries_.size());
}

SparseMatrix SparseMatrix::transpose() const {
    std::vector<std::size_t> count(rows_ + 1, 0);
    for (const auto& e : entries_) ++count[e.index + 1];
    for (std::size_t r = 0; r < rows_; ++r) count[r + 1] += count[r];
    SparseMatrix t;
    t.rows_ = cols();
    t.start_ = count;
    t.entries_.resize(entries_.size());
    auto fill = count;
    for (std::size_t j = 0; j < cols(); ++j)
        for (const auto& e : column(j)) t.entries_[fill[e.index]++] = {static_cast<std::uint32_t>(j), e.value};
    return t;
}

Scalar SparseMatrix::at(std::size_t row, std::size_t col) const {
    auto c = column(col);
    auto it = std::lower_bound(c.begin(), c.end(), row, [](const Entry& e, std::size_t r) { return e.index < r; });
    return (it != c.end() && it->index == row) ? it->value : 0;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b, const PrimeField& field) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: shape mismatch");
    SparseMatrix out(a.rows(), 0);
    SparseVec acc;
    for (std::size_t j = 0; j < b.cols(); ++j) {
        acc.clear();
        for (const auto& eb : b.column(j))
            for (const auto& ea : a.column(eb.index)) acc.push_back({ea.index, field.mul(ea.value, eb.value)});
        canonicalize(acc, field);
        out.push_column(acc);
    }
    return out;
}

SparseMatrix scale(const SparseMatrix& a, Scalar c, const PrimeField& field) {
    SparseMatrix out(a.rows(), 0);
    SparseVec col;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        col.clear();
        if (c != 0)
            for (const auto& e : a.column(j)) col.push_back({e.index, field.mul(e.value, c)});
        out.push_column(col);
    }
    return out;
}

SparseMatrix subtract(const SparseMatrix& a, const SparseMatrix& b, const PrimeField& field) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("subtract: shape mismatch");
    SparseMatrix out(a.rows(), 0);
    SparseVec col;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        col.assign(a.column(j).begin(), a.column(j).end());
        for (const auto& e : b.column(j)) col.push_back({e.index, field.neg(e.value)});
        canonicalize(col, field);
        out.push_column(col);
    }
    return out;
}

std::size_t rank(const SparseMatrix& m, const PrimeField& field) {
    const std::size_t rows = m.rows();
    // Reduced pivot columns, each normalized so its lowest (largest-row) entry is 1.
    std::vector<std::int32_t> pivot(rows, -1);
    std::vector<SparseVec> reduced;
    std::vector<Scalar> acc(rows, 0);
    std::vector<char> queued(rows, 0);
    std::priority_queue<std::uint32_t> heap;

    auto touch = [&](std::uint32_t r) {
        if (!queued[r]) {
            queued[r] = 1;
            heap.push(r);
        }
    };

    for (std::size_t j = 0; j < m.cols(); ++j) {
        for (const auto& e : m.column(j)) {
            acc[e.index] = e.value;
            touch(e.index);
        }
        while (!heap.empty()) {
            std::uint32_t r = heap.top();
            heap.pop();
            queued[r] = 0;
            Scalar c = acc[r];
            if (c == 0) continue;
            if (pivot[r] >= 0) {
                for (const auto& e : reduced[pivot[r]]) {
                    acc[e.index] = field.sub(acc[e.index], field.mul(c, e.value));
                    if (e.index != r) touch(e.index);
                }
                continue;
            }
            SparseVec col;
            Scalar inv = field.inv(c);
            col.push_back({r, 1});
            acc[r] = 0;
            while (!heap.empty()) {
                std::uint32_t q = heap.top();
                heap.pop();
                queued[q] = 0;
                if (acc[q] != 0) col.push_back({q, field.mul(acc[q], inv)});
                acc[q] = 0;
            }
            std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
            pivot[r] = static_cast<std::int32_t>(reduced.size());
            reduced.push_back(std::move(col));
        }
    }
    return reduced.size();
}

GradedBasis::GradedBasis(std::map<int, std::size_t> dims, Namer namer) {
    for (auto [deg, n] : dims)
        if (n > 0) dims_[deg] = n;
    if (namer) namer_ = std::make_shared<const Namer>(std::move(namer));
}

GradedBasis GradedBasis::from_names(const std::map<int, std::vector<std::string>>& names) {
    std::map<int, std::size_t> dims;
    for (const auto& [deg, list] : names) {
        std::set<std::string> seen(list.begin(), list.end());
        if (seen.size() != list.size()) throw std::invalid_argument("GradedBasis: duplicate name in degree " + std::to_string(deg));
        dims[deg] = list.size();
    }
    auto copy = std::make_shared<const std::map<int, std::vector<std::string>>>(names);
    return GradedBasis(dims, [copy](int deg, std::size_t i) { return copy->at(deg).at(i); });
}

std::size_t GradedBasis::dim(int degree) const {
    auto it = dims_.find(degree);
    return it == dims_.end() ? 0 : it->second;
}

std::size_t GradedBasis::total() const {
    std::size_t t = 0;
    for (auto [d, n] : dims_) t += n;
    return t;
}

std::string GradedBasis::name(int degree, std::size_t index) const {
    if (namer_) return (*namer_)(degree, index);
    return "e[" + std::to_string(degree) + "," + std::to_string(index) + "]";
}

std::optional<int> GradedBasis::min_degree() const {
    if (dims_.empty()) return std::nullopt;
    return dims_.begin()->first;
}

std::optional<int> GradedBasis::max_degree() const {
    if (dims_.empty()) return std::nullopt;
    return dims_.rbegin()->first;
}

ChainComplex::ChainComplex(PrimeField field, GradedBasis basis, std::map<int, SparseMatrix> d, DegreeWindow window,
                           Grading grading)
    : field_(field), basis_(std::move(basis)), d_(std::move(d)), window_(window), grading_(grading) {
    if (grading_ == Grading::Z2) {
        for (auto [deg, n] : basis_.dims())
            if (deg != 0 && deg != 1) throw std::invalid_argument("ChainComplex: Z/2 degrees must be 0 or 1");
        window_ = DegreeWindow::none();
    }
    for (const auto& [deg, m] : d_) {
        if (m.cols() != dim(deg) || m.rows() != dim(next(deg)))
            throw std::invalid_argument("ChainComplex: differential shape mismatch in degree " + std::to_string(deg));
    }
    // Materialize zero differentials next to the support so d() can hand out references.
    for (auto [deg, n] : basis_.dims()) {
        d_.try_emplace(deg, dim(next(deg)), n);
        d_.try_emplace(prev(deg), n, dim(prev(deg)));
    }
}

int ChainComplex::shift(int n, int k) const noexcept {
    if (grading_ == Grading::Z) return n + k;
    return ((n + k) % 2 + 2) % 2;
}

const SparseMatrix& ChainComplex::d(int n) const {
    static const SparseMatrix empty;
    auto it = d_.find(n);
    return it != d_.end() ? it->second : empty;
}

ChainComplex ChainComplex::with_window(DegreeWindow w) const {
    ChainComplex c = *this;
    c.window_ = grading_ == Grading::Z ? w : DegreeWindow::none();
    return c;
}

SignConventionError::SignConventionError(Violation v)
    : std::runtime_error("d^2 != 0 at degree " + std::to_string(v.degree) + " on " + v.element), v_(std::move(v)) {}

std::optional<Violation> find_d_squared_violation(const ChainComplex& c, DegreeWindow range) {
    std::vector<int> degrees;
    for (auto [deg, n] : c.basis().dims())
        if (range.empty() || range.contains(deg)) degrees.push_back(deg);
    for (int n : degrees) {
        auto dd = multiply(c.d(c.next(n)), c.d(n), c.field());
        for (std::size_t j = 0; j < dd.cols(); ++j)
            if (!dd.column(j).empty()) return Violation{n, j, c.basis().name(n, j), "d^2 != 0"};
    }
    return std::nullopt;
}

std::size_t HomologyReport::dim(int n) const {
    for (const auto& r : rows)
        if (r.degree == n) return r.dim;
    return 0;
}

bool HomologyReport::stable(int n) const {
    for (const auto& r : rows)
        if (r.degree == n) return r.stable;
    return false;
}

std::vector<int> HomologyReport::stable_degrees() const {
    std::vector<int> out;
    for (const auto& r : rows)
        if (r.stable) out.push_back(r.degree);
    return out;
}

HomologyReport homology(const ChainComplex& c, DegreeWindow range) {
    std::set<int> degrees;
    if (range.empty()) {
        for (auto [deg, n] : c.basis().dims()) degrees.insert(deg);
        if (!c.window().empty())
            for (int n = c.window().lo; n <= c.window().hi; ++n) degrees.insert(n);
    } else {
        for (int n = range.lo; n <= range.hi; ++n) degrees.insert(c.grading() == Grading::Z ? n : c.shift(n, 0));
    }
    // Ranks needed: d_n and d_{n-1} for every reported n.
    std::set<int> rank_degrees;
    for (int n : degrees) {
        if (c.dim(n) > 0) rank_degrees.insert(n);
        if (c.dim(c.prev(n)) > 0) rank_degrees.insert(c.prev(n));
    }
    std::set<int> check;
    for (int n : rank_degrees) check.insert(n);
    for (int n : check) {
        auto dd = multiply(c.d(c.next(n)), c.d(n), c.field());
        for (std::size_t j = 0; j < dd.cols(); ++j)
            if (!dd.column(j).empty()) throw SignConventionError({n, j, c.basis().name(n, j), "d^2 != 0"});
    }
    std::vector<int> todo(rank_degrees.begin(), rank_degrees.end());
    std::vector<std::size_t> ranks(todo.size(), 0);
    parallel_for(todo.size(), [&](std::size_t i) { ranks[i] = rank(c.d(todo[i]), c.field()); });
    std::map<int, std::size_t> rank_of;
    for (std::size_t i = 0; i < todo.size(); ++i) rank_of[todo[i]] = ranks[i];

    HomologyReport report;
    for (int n : degrees) {
        std::size_t dim = c.dim(n);
        std::size_t out = rank_of.count(n) ? rank_of[n] : 0;
        std::size_t in = rank_of.count(c.prev(n)) ? rank_of[c.prev(n)] : 0;
        bool stable = c.grading() == Grading::Z && c.window().contains(n);
        report.rows.push_back({n, dim - out - in, stable});
    }
    return report;
}

ChainMap::ChainMap(Ptr source, Ptr target, int shift, std::map<int, SparseMatrix> components)
    : source_(std::move(source)), target_(std::move(target)), shift_(shift), f_(std::move(components)) {
    if (!(source_->field() == target_->field())) throw std::invalid_argument("ChainMap: field mismatch");
    for (const auto& [deg, m] : f_) {
        if (m.cols() != source_->dim(deg) || m.rows() != target_->dim(target_->shift(deg, shift_)))
            throw std::invalid_argument("ChainMap: component shape mismatch in degree " + std::to_string(deg));
    }
    auto fill = [this](int deg) {
        f_.try_emplace(deg, target_->dim(target_->shift(deg, shift_)), source_->dim(deg));
    };
    for (auto [deg, n] : source_->basis().dims()) {
        fill(deg);
        fill(source_->next(deg));
        fill(source_->prev(deg));
    }
    for (auto [deg, n] : target_->basis().dims()) fill(source_->shift(deg, -shift_));
}

ChainMap ChainMap::identity(Ptr c) {
    std::map<int, SparseMatrix> f;
    for (auto [deg, n] : c->basis().dims()) {
        SparseMatrix m(n, 0);
        for (std::uint32_t i = 0; i < n; ++i) {
            Entry e{i, 1};
            m.push_column(std::span<const Entry>(&e, 1));
        }
        f.emplace(deg, std::move(m));
    }
    return ChainMap(c, c, 0, std::move(f));
}

ChainMap ChainMap::zero(Ptr source, Ptr target, int shift) { return ChainMap(std::move(source), std::move(target), shift, {}); }

const SparseMatrix& ChainMap::component(int n) const {
    static const SparseMatrix empty;
    auto it = f_.find(n);
    return it != f_.end() ? it->second : empty;
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
    if (&f.target() != &g.source() && f.target_ptr() != g.source_ptr())
        throw std::invalid_argument("compose: target of f is not the source of g");
    std::map<int, SparseMatrix> out;
    for (auto [deg, n] : f.source().basis().dims()) {
        int mid = f.target().shift(deg, f.shift());
        out.emplace(deg, multiply(g.component(mid), f.component(deg), f.source().field()));
    }
    return ChainMap(f.source_ptr(), g.target_ptr(), f.shift() + g.shift(), std::move(out));
}

CheckReport verify_chain_map(const ChainMap& f, MapCheck mode) {
    const auto& src = f.source();
    const auto& tgt = f.target();
    const auto& F = src.field();
    Scalar sgn = F.sign(f.shift());
    for (auto [deg, n] : src.basis().dims()) {
        int out = tgt.shift(deg, f.shift());
        auto lhs = multiply(tgt.d(out), f.component(deg), F);
        auto rhs = scale(multiply(f.component(src.next(deg)), src.d(deg), F), sgn, F);
        auto diff = subtract(lhs, rhs, F);
        for (std::size_t j = 0; j < diff.cols(); ++j) {
            if (!diff.column(j).empty()) {
                Violation v{deg, j, src.basis().name(deg, j), "d f != (-1)^shift f d"};
                return {false, "not a chain map at degree " + std::to_string(deg) + " on " + v.element, v};
            }
        }
    }
    if (mode == MapCheck::chain_map) return {true, "chain map", std::nullopt};

    auto cone = mapping_cone(f);
    auto h = homology(cone);
    bool any_stable = !cone.window().empty();
    std::size_t checked = 0;
    for (const auto& row : h.rows) {
        if (any_stable && !row.stable) continue;
        ++checked;
        if (row.dim != 0) {
            Violation v{row.degree, 0, "cone", "cone homology of dimension " + std::to_string(row.dim)};
            return {false, "cone not acyclic in degree " + std::to_string(row.degree), v};
        }
    }
    std::string scope = any_stable ? "stable degrees" : "all degrees (no stable window)";
    return {true, "quasi-isomorphism: cone acyclic on " + std::to_string(checked) + " " + scope, std::nullopt};
}

ChainComplex mapping_cone(const ChainMap& f) {
    const auto& src = f.source();
    const auto& tgt = f.target();
    const auto& F = src.field();
    Grading g = src.grading();
    if (tgt.grading() != g) throw std::invalid_argument("mapping_cone: grading mismatch");
    int s = f.shift();
    auto norm = [&](int n) { return src.shift(n, 0); };

    std::set<int> degrees;
    for (auto [deg, n] : src.basis().dims()) degrees.insert(norm(deg - 1));
    for (auto [deg, n] : tgt.basis().dims()) degrees.insert(norm(deg - s));
    std::map<int, std::size_t> dims;
    for (int n : degrees) dims[n] = src.dim(src.shift(n, 1)) + tgt.dim(tgt.shift(n, s));

    auto src_basis = src.basis();
    auto tgt_basis = tgt.basis();
    GradedBasis basis(dims, [src_basis, tgt_basis, g, s](int n, std::size_t i) {
        auto sh = [g](int a, int k) { return g == Grading::Z ? a + k : ((a + k) % 2 + 2) % 2; };
        std::size_t a = src_basis.dim(sh(n, 1));
        if (i < a) return "src:" + src_basis.name(sh(n, 1), i);
        return "tgt:" + tgt_basis.name(sh(n, s), i - a);
    });

    std::map<int, SparseMatrix> d;
    Scalar tsign = F.sign(s);
    for (int n : degrees) {
        int sn = src.shift(n, 1);
        int tn = tgt.shift(n, s);
        int m = src.shift(n, 1);  // next cone degree
        std::size_t a_next = src.dim(src.shift(m, 1));
        std::size_t rows = a_next + tgt.dim(tgt.shift(m, s));
        SparseMatrix mat(rows, 0);
        auto ds = src.d(sn);
        auto fs = f.component(sn);
        auto dt = tgt.d(tn);
        SparseVec col;
        for (std::size_t j = 0; j < src.dim(sn); ++j) {
            col.clear();
            for (const auto& e : ds.column(j)) col.push_back({e.index, F.neg(e.value)});
            for (const auto& e : fs.column(j)) col.push_back({static_cast<std::uint32_t>(a_next + e.index), e.value});
            canonicalize(col, F);
            mat.push_column(col);
        }
        for (std::size_t j = 0; j < tgt.dim(tn); ++j) {
            col.clear();
            for (const auto& e : dt.column(j))
                col.push_back({static_cast<std::uint32_t>(a_next + e.index), F.mul(e.value, tsign)});
            canonicalize(col, F);
            mat.push_column(col);
        }
        d.emplace(n, std::move(mat));
    }

    DegreeWindow w = DegreeWindow::none();
    if (g == Grading::Z && !src.window().empty() && !tgt.window().empty()) {
        // H^n(cone) sits between H^n, H^{n+1} of the source and target.
        w.lo = std::max(src.window().lo, tgt.window().lo - s);
        w.hi = std::min(src.window().hi - 1, tgt.window().hi - s - 1);
    }
    return ChainComplex(F, std::move(basis), std::move(d), w, g);
}

namespace {

// Dense row reduction helpers for small induced-map computations.
using Dense = std::vector<std::vector<Scalar>>;  // list of columns

std::size_t dense_rank(Dense cols, std::size_t rows, const PrimeField& F) {
    std::size_t r = 0;
    std::vector<std::size_t> piv_row;
    for (std::size_t row = 0; row < rows && r < cols.size(); ++row) {
        std::size_t sel = r;
        while (sel < cols.size() && cols[sel][row] == 0) ++sel;
        if (sel == cols.size()) continue;
        std::swap(cols[r], cols[sel]);
        Scalar inv = F.inv(cols[r][row]);
        for (auto& x : cols[r]) x = F.mul(x, inv);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (k == r || cols[k][row] == 0) continue;
            Scalar c = cols[k][row];
            for (std::size_t i = 0; i < rows; ++i) cols[k][i] = F.sub(cols[k][i], F.mul(c, cols[r][i]));
        }
        ++r;
    }
    return r;
}

// Basis of the kernel of m (columns = domain).
Dense dense_kernel(const SparseMatrix& m, const PrimeField& F) {
    std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::vector<Scalar>> a(rows, std::vector<Scalar>(cols, 0));
    for (std::size_t j = 0; j < cols; ++j)
        for (const auto& e : m.column(j)) a[e.index][j] = e.value;
    std::vector<int> pivot_col_of_row;
    std::vector<char> is_pivot(cols, 0);
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = r;
        while (sel < rows && a[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(a[r], a[sel]);
        Scalar inv = F.inv(a[r][c]);
        for (auto& x : a[r]) x = F.mul(x, inv);
        for (std::size_t k = 0; k < rows; ++k) {
            if (k == r || a[k][c] == 0) continue;
            Scalar f = a[k][c];
            for (std::size_t i = 0; i < cols; ++i) a[k][i] = F.sub(a[k][i], F.mul(f, a[r][i]));
        }
        is_pivot[c] = 1;
        pivots.push_back(c);
        ++r;
    }
    Dense out;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Scalar> v(cols, 0);
        v[free] = 1;
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = F.neg(a[k][free]);
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

std::size_t induced_rank(const ChainMap& f, int n) {
    const auto& src = f.source();
    const auto& tgt = f.target();
    const auto& F = src.field();
    int out = tgt.shift(n, f.shift());
    auto cycles = dense_kernel(src.d(n), F);
    auto fm = f.component(n);
    std::size_t rows = tgt.dim(out);
    Dense boundaries;
    auto dprev = tgt.d(tgt.prev(out));
    for (std::size_t j = 0; j < dprev.cols(); ++j) {
        std::vector<Scalar> v(rows, 0);
        for (const auto& e : dprev.column(j)) v[e.index] = e.value;
        boundaries.push_back(std::move(v));
    }
    std::size_t base = dense_rank(boundaries, rows, F);
    Dense all = boundaries;
    for (const auto& z : cycles) {
        std::vector<Scalar> v(rows, 0);
        for (std::size_t j = 0; j < z.size(); ++j) {
            if (z[j] == 0) continue;
            for (const auto& e : fm.column(j)) v[e.index] = F.add(v[e.index], F.mul(z[j], e.value));
        }
        all.push_back(std::move(v));
    }
    return dense_rank(all, rows, F) - base;
}

unsigned worker_threads() {
    if (const char* env = std::getenv("CYCHOM_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : h;
}

}  // namespace cychom
