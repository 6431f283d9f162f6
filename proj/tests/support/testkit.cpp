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

#include "testkit.hpp"

#include <functional>
#include <stdexcept>

namespace testkit {

using cychom::AInfAlgebra;
using cychom::Elem;

std::size_t naive_rank(DenseMatrix a, const PrimeField& F) {
    std::size_t rank = 0;
    if (a.empty()) return 0;
    std::size_t cols = a[0].size();
    for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < a.size() && a[pivot][c] == 0) ++pivot;
        if (pivot == a.size()) continue;
        std::swap(a[pivot], a[rank]);
        Scalar inv = F.inv(a[rank][c]);
        for (std::size_t r = rank + 1; r < a.size(); ++r) {
            if (a[r][c] == 0) continue;
            Scalar f = F.mul(a[r][c], inv);
            for (std::size_t k = c; k < cols; ++k) a[r][k] = F.sub(a[r][k], F.mul(f, a[rank][k]));
        }
        ++rank;
    }
    return rank;
}

DenseMatrix to_dense(const cychom::SparseMatrix& m) {
    DenseMatrix out(m.rows(), std::vector<Scalar>(m.cols(), 0));
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (const auto& e : m.column(j)) out[e.index][j] = e.value;
    return out;
}

cychom::SparseMatrix to_sparse(const DenseMatrix& a, std::size_t cols) {
    cychom::SparseMatrix m(a.size(), 0);
    for (std::size_t j = 0; j < cols; ++j) {
        cychom::SparseVec col;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i][j]) col.push_back({static_cast<std::uint32_t>(i), a[i][j]});
        m.push_column(col);
    }
    return m;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, const PrimeField& F) {
    std::size_t inner = b.size(), cols = b.empty() ? 0 : b[0].size();
    DenseMatrix out(a.size(), std::vector<Scalar>(cols, 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) out[i][j] = F.add(out[i][j], F.mul(a[i][k], b[k][j]));
        }
    return out;
}

DenseMatrix inverse(DenseMatrix a, const PrimeField& F) {
    std::size_t n = a.size();
    DenseMatrix inv(n, std::vector<Scalar>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && a[pivot][c] == 0) ++pivot;
        if (pivot == n) throw std::domain_error("inverse: singular matrix");
        std::swap(a[pivot], a[c]);
        std::swap(inv[pivot], inv[c]);
        Scalar s = F.inv(a[c][c]);
        for (std::size_t k = 0; k < n; ++k) {
            a[c][k] = F.mul(a[c][k], s);
            inv[c][k] = F.mul(inv[c][k], s);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Scalar f = a[r][c];
            for (std::size_t k = 0; k < n; ++k) {
                a[r][k] = F.sub(a[r][k], F.mul(f, a[c][k]));
                inv[r][k] = F.sub(inv[r][k], F.mul(f, inv[c][k]));
            }
        }
    }
    return inv;
}

DenseMatrix random_invertible(std::size_t n, const PrimeField& F, std::mt19937& rng) {
    std::uniform_int_distribution<Scalar> coeff(0, F.p() - 1);
    for (;;) {
        DenseMatrix m(n, std::vector<Scalar>(n));
        for (auto& row : m)
            for (auto& x : row) x = coeff(rng);
        if (naive_rank(m, F) == n) return m;
    }
}

std::map<int, std::size_t> naive_homology(const cychom::ChainComplex& c) {
    std::map<int, std::size_t> out;
    const auto& F = c.field();
    for (const auto& [n, dim] : c.basis().dims()) {
        std::size_t r_out = naive_rank(to_dense(c.d(n)), F);
        std::size_t r_in = c.basis().dims().count(c.prev(n)) ? naive_rank(to_dense(c.d(c.prev(n))), F) : 0;
        out[n] = dim - r_out - r_in;
    }
    return out;
}

cychom::ChainComplex random_complex(const PrimeField& F, const std::map<int, int>& pieces,
                                    const std::map<int, int>& free, std::mt19937& rng) {
    // Block layout per degree: free summands, then targets of pieces from n-1, then sources of pieces at n.
    std::map<int, std::size_t> dims;
    auto count = [](const std::map<int, int>& m, int n) {
        auto it = m.find(n);
        return it == m.end() ? 0 : it->second;
    };
    std::map<int, int> degrees;
    for (auto [n, k] : pieces) degrees[n], degrees[n + 1];
    for (auto [n, k] : free) degrees[n];
    for (auto [n, unused] : degrees) dims[n] = count(free, n) + count(pieces, n - 1) + count(pieces, n);

    std::map<int, DenseMatrix> basis_change;
    for (auto [n, d] : dims) basis_change[n] = random_invertible(d, F, rng);

    std::map<int, cychom::SparseMatrix> d;
    for (auto [n, k] : pieces) {
        std::size_t src = dims[n], tgt = dims[n + 1];
        DenseMatrix block(tgt, std::vector<Scalar>(src, 0));
        std::size_t src_off = count(free, n) + count(pieces, n - 1);
        std::size_t tgt_off = count(free, n + 1);
        for (int i = 0; i < k; ++i) block[tgt_off + i][src_off + i] = 1;
        auto conj = multiply(multiply(basis_change[n + 1], block, F), inverse(basis_change[n], F), F);
        d[n] = to_sparse(conj, src);
    }
    return cychom::ChainComplex(F, cychom::GradedBasis(dims), std::move(d), {dims.begin()->first, dims.rbegin()->first});
}

namespace {

// Tensor words over the algebra basis.
using Word = std::vector<Elem>;
using Tensor = std::map<Word, Scalar>;

void add_to(Tensor& t, const Word& w, Scalar c, const PrimeField& F) {
    if (c == 0) return;
    auto& slot = t[w];
    slot = F.add(slot, c);
    if (slot == 0) t.erase(w);
}

}  // namespace

AInfAlgebra gauge_algebra(std::uint32_t p, int max_arity, std::uint32_t seed, bool keep_unit) {
    PrimeField F(p);
    // Basis 1, x, e, xe with degrees 0, 0, 1, 1.
    AInfAlgebra::Builder koszul(F, {{"1", 0}, {"x", 0}, {"e", 1}, {"xe", 1}}, cychom::Grading::Z, 2);
    koszul.unit("1");
    koszul.mu({"x"}, "e", 1);  // d x = e
    for (const char* a : {"1", "x", "e", "xe"}) {
        koszul.mu({"1", a}, a, 1);
        if (std::string(a) != "1") koszul.mu({a, "1"}, a, 1);
    }
    koszul.mu({"x", "e"}, "xe", 1);
    koszul.mu({"e", "x"}, "xe", -1);
    return gauge_transform(koszul.build(), max_arity, seed, keep_unit);
}

AInfAlgebra gauge_transform(const AInfAlgebra& dga, int max_arity, std::uint32_t seed, bool keep_unit) {
    const PrimeField& F = dga.field();
    const std::uint32_t p = F.p();
    std::mt19937 rng(seed);
    std::uniform_int_distribution<Scalar> coeff(0, p - 1);
    const std::vector<cychom::BasisElement>& basis = dga.basis();
    const int dim = static_cast<int>(dga.dim());
    std::vector<int> deg(dim);
    for (int a = 0; a < dim; ++a) deg[a] = dga.degree(static_cast<Elem>(a));
    auto shifted = [&](Elem a) { return deg[a] - 1; };
    const auto unit = dga.unit();
    if (keep_unit && !unit) throw std::invalid_argument("gauge_transform: keep_unit needs a unit");

    // Shifted operations of the dga, arities 1 and 2.
    std::map<Word, std::vector<std::pair<Elem, Scalar>>> mu;
    for (int n = 1; n <= 2; ++n) {
        Word w(n, 0);
        for (;;) {
            for (const auto& t : dga.mu_shifted(w)) mu[w].push_back({t.out, t.coeff});
            int i = n - 1;
            while (i >= 0 && w[i] + 1 == dim) w[i--] = 0;
            if (i < 0) break;
            ++w[i];
        }
    }

    // Random f2 of shifted degree 0: |f2(a,b)| = |a| + |b| - 1.
    std::map<Word, std::vector<std::pair<Elem, Scalar>>> f2;
    for (Elem a = 0; a < dim; ++a)
        for (Elem b = 0; b < dim; ++b) {
            if (keep_unit && (a == *unit || b == *unit)) continue;
            int target = deg[a] + deg[b] - 1;
            for (Elem o = 0; o < dim; ++o)
                if (deg[o] == target) {
                    Scalar c = coeff(rng);
                    if (c) f2[{a, b}].push_back({o, c});
                }
        }

    // F(w): sum over splittings of w into blocks of length 1 and 2.
    std::function<void(const Word&, std::size_t, Word&, Scalar, Tensor&)> apply_f =
        [&](const Word& w, std::size_t pos, Word& prefix, Scalar c, Tensor& out) {
            if (pos == w.size()) {
                add_to(out, prefix, c, F);
                return;
            }
            prefix.push_back(w[pos]);
            apply_f(w, pos + 1, prefix, c, out);
            prefix.pop_back();
            if (pos + 1 < w.size()) {
                auto it = f2.find({w[pos], w[pos + 1]});
                if (it != f2.end())
                    for (auto [o, k] : it->second) {
                        prefix.push_back(o);
                        apply_f(w, pos + 2, prefix, F.mul(c, k), out);
                        prefix.pop_back();
                    }
            }
        };
    auto F_of = [&](const Word& w) {
        Tensor out;
        Word prefix;
        apply_f(w, 0, prefix, 1, out);
        return out;
    };
    // Coderivation of the dga.
    auto D_of = [&](const Word& w) {
        Tensor out;
        long long sign_exp = 0;
        for (std::size_t r = 0; r < w.size(); ++r) {
            for (std::size_t s = 1; s <= 2 && r + s <= w.size(); ++s) {
                auto it = mu.find(Word(w.begin() + r, w.begin() + r + s));
                if (it == mu.end()) continue;
                for (auto [o, k] : it->second) {
                    Word nw(w.begin(), w.begin() + r);
                    nw.push_back(o);
                    nw.insert(nw.end(), w.begin() + r + s, w.end());
                    add_to(out, nw, F.mul(k, F.sign(sign_exp)), F);
                }
            }
            sign_exp += shifted(w[r]);
        }
        return out;
    };
    // Components g_n of the inverse morphism, memoized; pi_1 G F = id.
    std::map<Word, std::vector<Scalar>> g_memo;
    std::function<const std::vector<Scalar>&(const Word&)> g_of = [&](const Word& w) -> const std::vector<Scalar>& {
        auto it = g_memo.find(w);
        if (it != g_memo.end()) return it->second;
        std::vector<Scalar> v(dim, 0);
        if (w.size() == 1) {
            v[w[0]] = 1;
        } else {
            for (const auto& [u, c] : F_of(w)) {
                if (u.size() == w.size()) continue;  // the identity term
                const auto& gu = g_of(u);
                for (int o = 0; o < dim; ++o) v[o] = F.sub(v[o], F.mul(c, gu[o]));
            }
        }
        return g_memo.emplace(w, std::move(v)).first->second;
    };

    AInfAlgebra::Builder builder(F, basis, cychom::Grading::Z, max_arity);
    if (keep_unit) builder.unit(basis[*unit].name);
    for (int n = 1; n <= max_arity; ++n) {
        Word w(n, 0);
        for (;;) {
            std::vector<Scalar> res(dim, 0);
            for (const auto& [u, c] : F_of(w))
                for (const auto& [v, k] : D_of(u)) {
                    const auto& gv = g_of(v);
                    for (int o = 0; o < dim; ++o) res[o] = F.add(res[o], F.mul(F.mul(c, k), gv[o]));
                }
            long long e = 0;
            for (int i = 0; i < n; ++i) e += static_cast<long long>(deg[w[i]]) * (n - 1 - i);
            for (int o = 0; o < dim; ++o)
                if (res[o]) builder.mu(w, static_cast<Elem>(o), F.mul(res[o], F.sign(e)));
            int i = n - 1;
            while (i >= 0 && w[i] + 1 == dim) w[i--] = 0;
            if (i < 0) break;
            ++w[i];
        }
    }
    return builder.build();
}

// After tensoring the resolution with A the complex is
// A <-0- A <-(m x^{m-1})- A <-0- A <- ...
std::map<int, std::size_t> koszul_hh_truncated_poly(std::uint32_t p, int m, int top) {
    PrimeField F(p);
    // Multiplication by m x^{m-1} on the basis 1, x, ..., x^{m-1}.
    DenseMatrix mult(m, std::vector<Scalar>(m, 0));
    mult[m - 1][0] = F.from_int(m);
    std::size_t r = naive_rank(mult, F);
    std::map<int, std::size_t> out;
    out[0] = m;  // d_1 = 0
    for (int n = 1; n <= top; ++n) {
        // Homological degree n: outgoing map is 0 for odd n and mult for even n.
        std::size_t out_rank = (n % 2 == 0) ? r : 0;
        std::size_t in_rank = (n % 2 == 1) ? r : 0;
        out[-n] = m - out_rank - in_rank;
    }
    return out;
}

AInfAlgebra corrupt_entry(const AInfAlgebra& a, std::size_t which, Scalar delta) {
    AInfAlgebra::Builder b(a.field(), a.basis(), a.grading(), a.arity_bound());
    if (a.unit()) b.unit(a.name(*a.unit()));
    auto entries = a.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto e = entries[i];
        if (i == which) e.coeff = a.field().add(e.coeff, delta);
        b.mu(e.inputs, e.output, e.coeff);
    }
    return b.build();
}

}  // namespace testkit
