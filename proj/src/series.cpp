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

#include "cychom/series.hpp"

#include <set>
#include <stdexcept>

namespace cychom {

Operator operator_identity(const ChainMap::Ptr& c) { return ChainMap::identity(c); }

Operator operator_add(const Operator& a, const Operator& b, Scalar coeff) {
    if (a.source_ptr() != b.source_ptr() || a.target_ptr() != b.target_ptr() || a.shift() != b.shift())
        throw std::invalid_argument("operator_add: operators act between different complexes");
    const auto& F = a.source().field();
    std::map<int, SparseMatrix> out;
    for (auto [deg, n] : a.source().basis().dims())
        out.emplace(deg, subtract(a.component(deg), scale(b.component(deg), F.neg(coeff), F), F));
    return ChainMap(a.source_ptr(), a.target_ptr(), a.shift(), std::move(out));
}

Operator operator_scale(const Operator& a, Scalar coeff) {
    const auto& F = a.source().field();
    std::map<int, SparseMatrix> out;
    for (auto [deg, n] : a.source().basis().dims()) out.emplace(deg, scale(a.component(deg), coeff, F));
    return ChainMap(a.source_ptr(), a.target_ptr(), a.shift(), std::move(out));
}

Operator operator_power(const Operator& a, int k) {
    if (a.shift() != 0 || a.source_ptr() != a.target_ptr())
        throw std::invalid_argument("operator_power: needs a degree-0 endomorphism");
    Operator r = ChainMap::identity(a.source_ptr());
    for (int i = 0; i < k; ++i) r = compose(a, r);
    return r;
}

Operator norm_operator(const Operator& tau, int p) {
    Operator power = ChainMap::identity(tau.source_ptr());
    Operator sum = power;
    for (int i = 1; i < p; ++i) {
        power = compose(tau, power);
        sum = operator_add(sum, power);
    }
    return sum;
}

Operator tau_minus_one_power(const Operator& tau, int k) {
    auto id = ChainMap::identity(tau.source_ptr());
    auto step = operator_add(tau, id, tau.source().field().neg(1));
    return operator_power(step, k);
}

bool operators_equal(const Operator& a, const Operator& b) {
    if (a.shift() != b.shift()) return false;
    for (auto [deg, n] : a.source().basis().dims())
        if (!subtract(a.component(deg), b.component(deg), a.source().field()).is_zero()) return false;
    return true;
}

SeriesComplex SeriesComplex::build(ChainMap::Ptr base, SeriesShape shape, const std::vector<SeriesTerm>& terms,
                                   DegreeWindow window, std::optional<int> floor) {
    if (shape.N < 0) throw std::invalid_argument("series: N must be nonnegative");
    const auto& X = *base;
    const auto& F = X.field();
    SeriesComplex s;
    s.base_ = base;
    s.shape_ = shape;
    s.floor_ = floor;
    const int thetas = shape.theta ? 2 : 1;
    for (const auto& t : terms) {
        if (t.op.source_ptr() != base || t.op.target_ptr() != base)
            throw std::invalid_argument("series: term operators must act on the base complex");
        if (t.from_theta >= thetas || t.to_theta >= thetas) throw std::invalid_argument("series: theta used without theta");
    }

    std::map<int, std::size_t> dims;
    for (int k = 0; k <= shape.N; ++k)
        for (int e = 0; e < thetas; ++e)
            for (auto [m, n] : X.basis().dims()) {
                int total = X.shift(m, shape.monomial_degree(k, e));
                if (floor && X.grading() == Grading::Z && total < *floor) continue;
                s.blocks_[total].push_back({k, e, m, dims[total]});
                dims[total] += n;
            }

    auto find_block = [&s](int total, int k, int e) -> const Block* {
        auto it = s.blocks_.find(total);
        if (it == s.blocks_.end()) return nullptr;
        for (const auto& b : it->second)
            if (b.k == k && b.e == e) return &b;
        return nullptr;
    };

    std::map<int, SparseMatrix> d;
    for (const auto& [total, blocks] : s.blocks_) {
        int next = X.shift(total, 1);
        std::size_t rows = dims.count(next) ? dims[next] : 0;
        SparseMatrix mat(rows, 0);
        SparseVec col;
        for (const auto& b : blocks) {
            // Gather the pieces acting on this block: (target block, matrix, scalar).
            struct Piece {
                const Block* target;
                SparseMatrix m;
                Scalar c;
            };
            std::vector<Piece> pieces;
            if (const Block* tb = find_block(next, b.k, b.e)) pieces.push_back({tb, X.d(b.x_degree), 1});
            for (const auto& t : terms) {
                if (t.from_theta != b.e) continue;
                int k2 = b.k + t.dt;
                if (k2 < 0 || k2 > shape.N) continue;
                int xdeg2 = X.shift(b.x_degree, t.op.shift());
                if (X.shift(xdeg2, shape.monomial_degree(k2, t.to_theta)) != next)
                    throw std::logic_error("series: term of the wrong degree");
                const Block* tb = find_block(next, k2, t.to_theta);
                if (!tb) continue;
                Scalar c = t.koszul ? F.mul(t.coeff, F.sign(b.x_degree)) : t.coeff;
                pieces.push_back({tb, t.op.component(b.x_degree), c});
            }
            for (std::size_t j = 0; j < X.dim(b.x_degree); ++j) {
                col.clear();
                for (const auto& pc : pieces)
                    for (const auto& e : pc.m.column(j))
                        col.push_back({static_cast<std::uint32_t>(pc.target->offset + e.index), F.mul(e.value, pc.c)});
                canonicalize(col, F);
                mat.push_column(col);
            }
        }
        mat.set_rows(rows);
        d.emplace(total, std::move(mat));
    }

    auto xb = X.basis();
    auto blocks = s.blocks_;
    GradedBasis basis(dims, [xb, blocks, shape](int total, std::size_t i) {
        const auto& list = blocks.at(total);
        std::size_t j = list.size();
        while (j > 0 && list[j - 1].offset > i) --j;
        const auto& b = list[j - 1];
        std::string name = xb.name(b.x_degree, i - b.offset);
        if (b.k > 0) name += "·" + shape.t_name + (b.k > 1 ? "^" + std::to_string(b.k) : "");
        if (b.e) name += "·" + shape.theta_name;
        return name;
    });
    s.total_ = std::make_shared<const ChainComplex>(F, std::move(basis), std::move(d), window, X.grading());
    return s;
}

SeriesComplex SeriesComplex::with_window(DegreeWindow w) const {
    SeriesComplex s = *this;
    s.total_ = std::make_shared<const ChainComplex>(total_->with_window(w));
    return s;
}

std::optional<std::pair<int, std::size_t>> SeriesComplex::locate(int x_degree, std::size_t x_index, int k, int e) const {
    int total = base_->shift(x_degree, shape_.monomial_degree(k, e));
    auto it = blocks_.find(total);
    if (it == blocks_.end()) return std::nullopt;
    for (const auto& b : it->second)
        if (b.k == k && b.e == e && b.x_degree == x_degree) return std::make_pair(total, b.offset + x_index);
    return std::nullopt;
}

ChainMap SeriesComplex::map_to(const SeriesComplex& target, int shift, const std::vector<SeriesTerm>& terms) const {
    const auto& X = *base_;
    const auto& F = X.field();
    const auto& T = *target.total_;
    for (const auto& t : terms)
        if (t.op.source_ptr() != base_ || t.op.target_ptr() != target.base_)
            throw std::invalid_argument("series map: term operators must map between the base complexes");
    std::map<int, SparseMatrix> comps;
    SparseVec col;
    for (const auto& [total, blocks] : blocks_) {
        int out = X.shift(total, shift);
        SparseMatrix mat(T.dim(out), 0);
        for (const auto& b : blocks) {
            struct Piece {
                std::size_t offset;
                SparseMatrix m;
                Scalar c;
            };
            std::vector<Piece> pieces;
            for (const auto& t : terms) {
                if (t.from_theta != b.e) continue;
                int k2 = b.k + t.dt;
                if (k2 < 0 || k2 > target.shape_.N) continue;
                int xdeg2 = X.shift(b.x_degree, t.op.shift());
                auto loc = target.locate(xdeg2, 0, k2, t.to_theta);
                if (!loc) continue;
                if (loc->first != out) throw std::logic_error("series map: term of the wrong degree");
                Scalar c = t.koszul ? F.mul(t.coeff, F.sign(b.x_degree)) : t.coeff;
                pieces.push_back({loc->second, t.op.component(b.x_degree), c});
            }
            for (std::size_t j = 0; j < X.dim(b.x_degree); ++j) {
                col.clear();
                for (const auto& pc : pieces)
                    for (const auto& e : pc.m.column(j))
                        col.push_back({static_cast<std::uint32_t>(pc.offset + e.index), F.mul(e.value, pc.c)});
                canonicalize(col, F);
                mat.push_column(col);
            }
        }
        comps.emplace(total, std::move(mat));
    }
    return ChainMap(total_, target.total_, shift, std::move(comps));
}

}  // namespace cychom
