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

#include "cychom/gysin.hpp"

#include <algorithm>
#include <stdexcept>

#include "cychom/hochschild.hpp"

namespace cychom {

namespace {

// Small modules are assembled densely, then frozen into sparse complexes.
using Mat = std::vector<std::vector<Scalar>>;  // rows x cols

Mat zeros(std::size_t r, std::size_t c) { return Mat(r, std::vector<Scalar>(c, 0)); }

struct DenseModule {
    int p = 3;
    std::map<int, std::vector<std::string>> names;
    std::map<int, Mat> d, tau, sigma;  // d: n -> n+1, tau: n -> n, sigma: n -> n-1

    std::size_t dim(int n) const {
        auto it = names.find(n);
        return it == names.end() ? 0 : it->second.size();
    }
    Mat& at(std::map<int, Mat>& m, int n, int shift) {
        auto it = m.find(n);
        if (it == m.end()) it = m.emplace(n, zeros(dim(n + shift), dim(n))).first;
        return it->second;
    }
    Mat& D(int n) { return at(d, n, 1); }
    Mat& T(int n) { return at(tau, n, 0); }
    Mat& S(int n) { return at(sigma, n, -1); }
};

SparseMatrix to_sparse(const Mat& m, std::size_t rows, std::size_t cols) {
    SparseMatrix s(rows, 0);
    SparseVec col;
    for (std::size_t j = 0; j < cols; ++j) {
        col.clear();
        for (std::size_t i = 0; i < rows; ++i)
            if (m[i][j]) col.push_back({static_cast<std::uint32_t>(i), m[i][j]});
        s.push_column(col);
    }
    s.set_rows(rows);
    return s;
}

Mat to_dense(const SparseMatrix& s) {
    Mat m = zeros(s.rows(), s.cols());
    for (std::size_t j = 0; j < s.cols(); ++j)
        for (const auto& e : s.column(j)) m[e.index][j] = e.value;
    return m;
}

DegreeWindow full_window(const GradedBasis& b) {
    auto lo = b.min_degree(), hi = b.max_degree();
    if (!lo) return DegreeWindow::none();
    return {*lo, *hi};
}

TauSigmaComplex freeze(DenseModule m, const PrimeField& F) {
    std::map<int, SparseMatrix> d, tau, sigma;
    for (const auto& [n, list] : m.names) {
        d.emplace(n, to_sparse(m.D(n), m.dim(n + 1), m.dim(n)));
        tau.emplace(n, to_sparse(m.T(n), m.dim(n), m.dim(n)));
        sigma.emplace(n, to_sparse(m.S(n), m.dim(n - 1), m.dim(n)));
    }
    auto basis = GradedBasis::from_names(m.names);
    auto w = full_window(basis);
    auto c = std::make_shared<const ChainComplex>(F, std::move(basis), std::move(d), w);
    return {c, ChainMap(c, c, 0, std::move(tau)), ChainMap(c, c, -1, std::move(sigma)), m.p};
}

DenseModule thaw(const TauSigmaComplex& x) {
    DenseModule m;
    m.p = x.p;
    for (auto [n, k] : x.complex->basis().dims()) {
        auto& list = m.names[n];
        for (std::size_t i = 0; i < k; ++i) list.push_back(x.complex->basis().name(n, i));
    }
    for (auto [n, k] : x.complex->basis().dims()) {
        m.d[n] = to_dense(x.complex->d(n));
        m.tau[n] = to_dense(x.tau.component(n));
        m.sigma[n] = to_dense(x.sigma.component(n));
    }
    return m;
}

Mat mat_mul(const Mat& a, const Mat& b, const PrimeField& F, std::size_t inner) {
    std::size_t r = a.size(), c = b.empty() ? 0 : b[0].size();
    Mat out = zeros(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < inner; ++k)
            if (a[i][k])
                for (std::size_t j = 0; j < c; ++j) out[i][j] = F.add(out[i][j], F.mul(a[i][k], b[k][j]));
    return out;
}

std::optional<Mat> mat_inverse(Mat a, const PrimeField& F) {
    std::size_t n = a.size();
    Mat inv = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && !a[piv][c]) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[c]);
        std::swap(inv[piv], inv[c]);
        Scalar s = F.inv(a[c][c]);
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] = F.mul(a[c][j], s);
            inv[c][j] = F.mul(inv[c][j], s);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || !a[r][c]) continue;
            Scalar f = a[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] = F.sub(a[r][j], F.mul(f, a[c][j]));
                inv[r][j] = F.sub(inv[r][j], F.mul(f, inv[c][j]));
            }
        }
    }
    return inv;
}

Scalar random_scalar(std::mt19937_64& rng, const PrimeField& F) {
    return static_cast<Scalar>(std::uniform_int_distribution<std::uint32_t>(0, F.p() - 1)(rng));
}

// Free k[tau, sigma]-module on one generator of degree s: v_i = tau^i g in
// degree s, e_i = tau^i sigma g in degree s - 1.
struct Piece {
    bool free = true;
    int shift = 0;
    std::size_t dim(int p) const { return free ? 2 * static_cast<std::size_t>(p) : 1; }
};

struct PieceLayout {
    std::vector<std::pair<int, std::size_t>> v, e;  // (degree, index) of v_i and e_i; v[0] only for trivial
};

// Appends the pieces to m, returning where each basis element landed.
std::vector<PieceLayout> add_pieces(DenseModule& m, const std::vector<Piece>& pieces, const std::string& tag) {
    std::vector<PieceLayout> out;
    int counter = 0;
    for (const auto& pc : pieces) {
        PieceLayout lay;
        std::string g = tag + std::to_string(counter++);
        if (!pc.free) {
            lay.v.push_back({pc.shift, m.names[pc.shift].size()});
            m.names[pc.shift].push_back(g);
        } else {
            for (int i = 0; i < m.p; ++i) {
                lay.v.push_back({pc.shift, m.names[pc.shift].size()});
                m.names[pc.shift].push_back(g + "v" + std::to_string(i));
            }
            for (int i = 0; i < m.p; ++i) {
                lay.e.push_back({pc.shift - 1, m.names[pc.shift - 1].size()});
                m.names[pc.shift - 1].push_back(g + "e" + std::to_string(i));
            }
        }
        out.push_back(std::move(lay));
    }
    return out;
}

// Structure maps of the pieces, written into m after all names exist.
void write_piece_structure(DenseModule& m, const std::vector<Piece>& pieces, const std::vector<PieceLayout>& lay,
                           const PrimeField& F) {
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const auto& L = lay[k];
        if (!pieces[k].free) {
            auto [n, i] = L.v[0];
            m.T(n)[i][i] = 1;
            continue;
        }
        for (int i = 0; i < m.p; ++i) {
            int j = (i + 1) % m.p;
            auto [nv, vi] = L.v[i];
            auto [ne, ei] = L.e[i];
            m.T(nv)[L.v[j].second][vi] = 1;
            m.T(ne)[L.e[j].second][ei] = 1;
            m.S(nv)[ei][vi] = 1;
            m.D(ne)[L.v[j].second][ei] = F.add(m.D(ne)[L.v[j].second][ei], 1);
            m.D(ne)[vi][ei] = F.sub(m.D(ne)[vi][ei], 1);
        }
    }
}

}  // namespace

CheckReport check_zp_complex(const ZpComplex& x) {
    const auto& F = x.complex->field();
    if (F.p() != static_cast<std::uint32_t>(x.p))
        return {false, "the characteristic differs from the group order", std::nullopt};
    if (x.tau.shift() != 0 || x.tau.source_ptr() != x.complex || x.tau.target_ptr() != x.complex)
        return {false, "tau must be a degree 0 endomorphism", std::nullopt};
    if (auto r = verify_chain_map(x.tau); !r.ok) return {false, "tau: " + r.detail, r.witness};
    if (!operators_equal(operator_power(x.tau, x.p), operator_identity(x.complex)))
        return {false, "tau^p != 1", std::nullopt};
    return {true, "Z/p-complex", std::nullopt};
}

CheckReport check_tau_sigma_complex(const TauSigmaComplex& x) {
    if (auto r = check_zp_complex(x.restrict_to_zp()); !r.ok) return r;
    const auto& C = *x.complex;
    const auto& F = C.field();
    if (x.sigma.shift() != -1 || x.sigma.source_ptr() != x.complex || x.sigma.target_ptr() != x.complex)
        return {false, "sigma must be a degree -1 endomorphism", std::nullopt};
    auto witness = [&](int n, const SparseMatrix& diff, const std::string& what) -> std::optional<CheckReport> {
        for (std::size_t j = 0; j < diff.cols(); ++j)
            if (!diff.column(j).empty()) {
                Violation v{n, j, C.basis().name(n, j), what};
                return CheckReport{false, what + " fails on " + v.element, v};
            }
        return std::nullopt;
    };
    for (auto [n, k] : C.basis().dims()) {
        const auto& s = x.sigma.component(n);
        if (auto r = witness(n, multiply(x.sigma.component(n - 1), s, F), "sigma^2 = 0")) return *r;
        auto ts = multiply(x.tau.component(n - 1), s, F);
        auto st = multiply(s, x.tau.component(n), F);
        if (auto r = witness(n, subtract(ts, st, F), "tau sigma = sigma tau")) return *r;
        // d sigma + sigma d - (tau - 1)
        auto lhs = multiply(C.d(n - 1), s, F);
        auto sd = multiply(x.sigma.component(n + 1), C.d(n), F);
        auto rhs = subtract(x.tau.component(n), ChainMap::identity(x.complex).component(n), F);
        if (auto r = witness(n, subtract(subtract(lhs, scale(sd, F.neg(1), F), F), rhs, F), "d sigma + sigma d = tau - 1"))
            return *r;
    }
    return {true, "k[tau, sigma]-complex", std::nullopt};
}

TauSigmaComplex trivial_module(int p) {
    DenseModule m;
    m.p = p;
    add_pieces(m, {{false, 0}}, "1");
    m.names[0] = {"1"};
    m.T(0)[0][0] = 1;
    return freeze(std::move(m), PrimeField(p));
}

TauSigmaComplex circle_model(int p) {
    PrimeField F(p);
    DenseModule m;
    m.p = p;
    std::vector<Piece> pieces{{true, 0}};
    auto lay = add_pieces(m, pieces, "");
    for (int i = 0; i < p; ++i) {
        m.names[0][i] = "v" + std::to_string(i);
        m.names[-1][i] = "e" + std::to_string(i);
    }
    write_piece_structure(m, pieces, lay, F);
    return freeze(std::move(m), F);
}

ZpComplex regular_representation(int p) {
    PrimeField F(p);
    std::map<int, std::vector<std::string>> names;
    for (int i = 0; i < p; ++i) names[0].push_back("g" + std::to_string(i));
    auto basis = GradedBasis::from_names(names);
    auto c = std::make_shared<const ChainComplex>(F, std::move(basis), std::map<int, SparseMatrix>{}, DegreeWindow{0, 0});
    Mat t = zeros(p, p);
    for (int i = 0; i < p; ++i) t[(i + 1) % p][i] = 1;
    std::map<int, SparseMatrix> tau;
    tau.emplace(0, to_sparse(t, p, p));
    return {c, ChainMap(c, c, 0, std::move(tau)), p};
}

TauSigmaComplex tensor_with(const TauSigmaComplex& x, const ChainComplex& v) {
    const auto& F = x.complex->field();
    if (!(v.field() == F)) throw std::invalid_argument("tensor_with: fields differ");
    auto X = thaw(x);
    DenseModule m;
    m.p = x.p;
    // (degree of x, degree of v) -> offset in the product degree
    std::map<std::pair<int, int>, std::size_t> offset;
    for (const auto& [a, xs] : X.names)
        for (auto [b, k] : v.basis().dims()) {
            auto& list = m.names[a + b];
            offset[{a, b}] = list.size();
            for (const auto& xn : xs)
                for (std::size_t j = 0; j < k; ++j) list.push_back(xn + "⊗" + v.basis().name(b, j));
        }
    for (const auto& [a, xs] : X.names)
        for (auto [b, k] : v.basis().dims()) {
            std::size_t off = offset[{a, b}];
            auto dv = to_dense(v.d(b));
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = 0; j < k; ++j) {
                    std::size_t col = off + i * k + j;
                    int n = a + b;
                    auto place = [&](std::map<int, Mat>& target, int shift, int a2, int b2, std::size_t i2, std::size_t j2,
                                     Scalar c) {
                        if (!c) return;
                        std::size_t row = offset.at({a2, b2}) + i2 * v.dim(b2) + j2;
                        auto& M = m.at(target, n, shift);
                        M[row][col] = F.add(M[row][col], c);
                    };
                    for (std::size_t r = 0; r < X.dim(a + 1); ++r) place(m.d, 1, a + 1, b, r, j, X.D(a)[r][i]);
                    for (std::size_t r = 0; r < v.dim(b + 1); ++r)
                        place(m.d, 1, a, b + 1, i, r, F.mul(F.sign(a), dv[r][j]));
                    for (std::size_t r = 0; r < X.dim(a); ++r) place(m.tau, 0, a, b, r, j, X.T(a)[r][i]);
                    for (std::size_t r = 0; r < X.dim(a - 1); ++r) place(m.sigma, -1, a - 1, b, r, j, X.S(a)[r][i]);
                }
        }
    return freeze(std::move(m), F);
}

TauSigmaComplex random_tau_sigma_complex(int p, std::mt19937_64& rng, std::size_t max_dim) {
    PrimeField F(p);
    auto coin = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    std::vector<Piece> src, tgt;
    std::size_t used = 0;
    auto draw = [&](std::vector<Piece>& into, int count) {
        for (int i = 0; i < count; ++i) {
            Piece pc{coin(2) == 0, coin(3) - 1};
            if (used + pc.dim(p) > max_dim) pc.free = false;
            if (used + pc.dim(p) > max_dim) return;
            used += pc.dim(p);
            into.push_back(pc);
        }
    };
    draw(tgt, 1 + coin(2));
    draw(src, coin(3));

    // The cone of f: M -> M' lives on M[1] + M'; place M' first, then M shifted.
    DenseModule m;
    m.p = p;
    auto tl = add_pieces(m, tgt, "b");
    std::vector<Piece> shifted = src;
    for (auto& pc : shifted) pc.shift -= 1;
    auto sl = add_pieces(m, shifted, "a");
    write_piece_structure(m, tgt, tl, F);
    DenseModule tmp;  // structure of M[1], copied with the cone signs
    tmp.p = p;
    tmp.names = m.names;
    write_piece_structure(tmp, shifted, sl, F);
    for (const auto& L : sl)
        for (const auto& [n, i] : [&] {
                 auto all = L.v;
                 all.insert(all.end(), L.e.begin(), L.e.end());
                 return all;
             }()) {
            for (std::size_t r = 0; r < m.dim(n + 1); ++r) m.D(n)[r][i] = F.neg(tmp.D(n)[r][i]);
            for (std::size_t r = 0; r < m.dim(n); ++r) m.T(n)[r][i] = tmp.T(n)[r][i];
            for (std::size_t r = 0; r < m.dim(n - 1); ++r) m.S(n)[r][i] = F.neg(tmp.S(n)[r][i]);
        }

    // f: M -> M' on the generators of each pair, extended as a module map.
    for (std::size_t a = 0; a < src.size(); ++a)
        for (std::size_t b = 0; b < tgt.size(); ++b) {
            const auto &P = src[a], &Q = tgt[b];
            const auto &A = sl[a], &B = tl[b];
            auto add = [&](std::pair<int, std::size_t> from, std::pair<int, std::size_t> to, Scalar c) {
                auto& M = m.D(from.first);
                M[to.second][from.second] = F.add(M[to.second][from.second], c);
            };
            if (P.free && Q.free && Q.shift == P.shift) {
                for (int r = 0; r < p; ++r) {
                    Scalar c = random_scalar(rng, F);
                    for (int i = 0; i < p; ++i) {
                        add(A.v[i], B.v[(i + r) % p], c);
                        add(A.e[i], B.e[(i + r) % p], c);
                    }
                }
            } else if (P.free && Q.free && Q.shift == P.shift + 1) {
                Scalar c = random_scalar(rng, F);
                for (int i = 0; i < p; ++i)
                    for (int r = 0; r < p; ++r) add(A.v[i], B.e[r], c);
            } else if (P.free && !Q.free && Q.shift == P.shift) {
                Scalar c = random_scalar(rng, F);
                for (int i = 0; i < p; ++i) add(A.v[i], B.v[0], c);
            } else if (!P.free && Q.free && Q.shift == P.shift + 1) {
                Scalar c = random_scalar(rng, F);
                for (int r = 0; r < p; ++r) add(A.v[0], B.e[r], c);
            } else if (!P.free && !Q.free && Q.shift == P.shift) {
                add(A.v[0], B.v[0], random_scalar(rng, F));
            }
        }

    // A random graded change of basis hides the block structure.
    std::map<int, Mat> P, Pinv;
    for (const auto& [n, list] : m.names) {
        std::size_t k = list.size();
        for (;;) {
            Mat g = zeros(k, k);
            for (auto& row : g)
                for (auto& v : row) v = random_scalar(rng, F);
            if (auto inv = mat_inverse(g, F)) {
                P[n] = g;
                Pinv[n] = *inv;
                break;
            }
        }
    }
    DenseModule out;
    out.p = p;
    for (const auto& [n, list] : m.names)
        for (std::size_t i = 0; i < list.size(); ++i) out.names[n].push_back("x" + std::to_string(n) + "_" + std::to_string(i));
    for (const auto& [n, list] : m.names) {
        std::size_t k = list.size();
        if (m.dim(n + 1)) out.D(n) = mat_mul(mat_mul(P[n + 1], m.D(n), F, m.dim(n + 1)), Pinv[n], F, k);
        out.T(n) = mat_mul(mat_mul(P[n], m.T(n), F, k), Pinv[n], F, k);
        if (m.dim(n - 1)) out.S(n) = mat_mul(mat_mul(P[n - 1], m.S(n), F, m.dim(n - 1)), Pinv[n], F, k);
    }
    return freeze(std::move(out), F);
}

CheckReport check_module_morphism(const ModuleMorphism& f) {
    if (f.map.shift() != 0) return {false, "a module map has degree 0", std::nullopt};
    if (auto r = verify_chain_map(f.map); !r.ok) return r;
    const auto& F = f.source.complex->field();
    for (auto [n, k] : f.source.complex->basis().dims()) {
        auto lhs = multiply(f.map.component(n), f.source.tau.component(n), F);
        auto rhs = multiply(f.target.tau.component(n), f.map.component(n), F);
        if (!subtract(lhs, rhs, F).is_zero()) return {false, "f tau != tau f in degree " + std::to_string(n), std::nullopt};
        lhs = multiply(f.map.component(n - 1), f.source.sigma.component(n), F);
        rhs = multiply(f.target.sigma.component(n), f.map.component(n), F);
        if (!subtract(lhs, rhs, F).is_zero())
            return {false, "f sigma != sigma f in degree " + std::to_string(n), std::nullopt};
    }
    return {true, "module map", std::nullopt};
}

ModuleMorphism polynomial_endomorphism(const TauSigmaComplex& x, Scalar a, Scalar b) {
    auto f = operator_add(operator_scale(operator_identity(x.complex), a), x.tau, b);
    return {x, x, std::move(f)};
}

namespace {

// x + y with the basis of x first in every degree.
std::pair<TauSigmaComplex, std::map<int, std::size_t>> direct_sum(const TauSigmaComplex& x, const TauSigmaComplex& y) {
    if (x.p != y.p) throw std::invalid_argument("direct sum: different p");
    auto X = thaw(x), Y = thaw(y);
    DenseModule m;
    m.p = x.p;
    std::map<int, std::size_t> split;
    for (const auto& [n, l] : X.names)
        for (const auto& s : l) m.names[n].push_back("(" + s + ",0)");
    for (auto& [n, l] : m.names) split[n] = l.size();
    for (const auto& [n, l] : Y.names) {
        split.emplace(n, 0);
        for (const auto& s : l) m.names[n].push_back("(0," + s + ")");
    }
    auto copy = [&](DenseModule& src, std::map<int, Mat>& which_src, std::map<int, Mat>& which_dst, int shift,
                    bool second) {
        for (auto& [n, M] : which_src) {
            auto& D = m.at(which_dst, n, shift);
            std::size_t ro = second ? split[n + shift] : 0, co = second ? split[n] : 0;
            for (std::size_t i = 0; i < src.dim(n + shift); ++i)
                for (std::size_t j = 0; j < src.dim(n); ++j) D[ro + i][co + j] = M[i][j];
        }
    };
    copy(X, X.d, m.d, 1, false);
    copy(X, X.tau, m.tau, 0, false);
    copy(X, X.sigma, m.sigma, -1, false);
    copy(Y, Y.d, m.d, 1, true);
    copy(Y, Y.tau, m.tau, 0, true);
    copy(Y, Y.sigma, m.sigma, -1, true);
    return {freeze(std::move(m), x.complex->field()), split};
}

}  // namespace

ModuleMorphism sum_inclusion(const TauSigmaComplex& x, const TauSigmaComplex& y) {
    auto [s, split] = direct_sum(x, y);
    std::map<int, SparseMatrix> comps;
    for (auto [n, k] : x.complex->basis().dims()) {
        Mat m = zeros(s.complex->dim(n), k);
        for (std::size_t i = 0; i < k; ++i) m[i][i] = 1;
        comps.emplace(n, to_sparse(m, s.complex->dim(n), k));
    }
    ChainMap f(x.complex, s.complex, 0, std::move(comps));
    return {x, s, std::move(f)};
}

ModuleMorphism sum_projection(const TauSigmaComplex& x, const TauSigmaComplex& y) {
    auto [s, split] = direct_sum(x, y);
    std::map<int, SparseMatrix> comps;
    for (auto [n, k] : s.complex->basis().dims()) {
        std::size_t off = split[n];
        Mat m = zeros(y.complex->dim(n), k);
        for (std::size_t i = 0; i < y.complex->dim(n); ++i) m[i][off + i] = 1;
        comps.emplace(n, to_sparse(m, y.complex->dim(n), k));
    }
    ChainMap f(s.complex, y.complex, 0, std::move(comps));
    return {s, y, std::move(f)};
}

std::string to_string(Totalization kind) {
    switch (kind) {
        case Totalization::hofix_zp: return "hofix-zp";
        case Totalization::hofix_ts: return "hofix-ts";
        case Totalization::hoorb_zp: return "hoorb-zp";
        case Totalization::hoorb_ts: return "hoorb-ts";
    }
    return "?";
}

std::optional<Totalization> totalization_from_string(const std::string& s) {
    for (auto k : {Totalization::hofix_zp, Totalization::hofix_ts, Totalization::hoorb_zp, Totalization::hoorb_ts})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

DegreeWindow totalization_window(const ChainComplex& x, Totalization kind, int N) {
    if (x.grading() != Grading::Z) return DegreeWindow::none();
    auto lo = x.basis().min_degree(), hi = x.basis().max_degree();
    if (!lo) return DegreeWindow::none();
    bool fixed = kind == Totalization::hofix_zp || kind == Totalization::hofix_ts;
    return fixed ? DegreeWindow{*lo, *lo + 2 * N} : DegreeWindow{*hi - 2 * N, *hi};
}

namespace {

SeriesShape shape_for(Totalization kind, int N, bool theta) {
    bool fixed = kind == Totalization::hofix_zp || kind == Totalization::hofix_ts;
    if (fixed) return {SeriesVariable::t, theta, N, "t", "θ"};
    return {SeriesVariable::t_dual, theta, N, "t̃", "θ̃"};
}

SeriesComplex zp_totalization(const ZpComplex& x, Totalization kind, int N) {
    if (N < 0) throw std::invalid_argument("equivariant_totalization: N must be nonnegative");
    if (x.complex->field().p() != static_cast<std::uint32_t>(x.p))
        throw std::invalid_argument("equivariant_totalization: p must equal the characteristic");
    auto tm1 = tau_minus_one_power(x.tau, 1);
    auto norm = norm_operator(x.tau, x.p);
    std::vector<SeriesTerm> terms;
    if (kind == Totalization::hofix_zp)
        terms = {{0, 1, 0, tm1, true, 1}, {1, 0, 1, norm, true, 1}};
    else
        terms = {{0, 1, -1, norm, true, 1}, {1, 0, 0, tm1, true, 1}};
    return SeriesComplex::build(x.complex, shape_for(kind, N, true), terms, totalization_window(*x.complex, kind, N));
}

}  // namespace

SeriesComplex equivariant_totalization(const ZpComplex& x, Totalization kind, int N) {
    if (kind == Totalization::hofix_ts || kind == Totalization::hoorb_ts)
        throw std::invalid_argument("equivariant_totalization: " + to_string(kind) + " needs sigma");
    return zp_totalization(x, kind, N);
}

SeriesComplex equivariant_totalization(const TauSigmaComplex& x, Totalization kind, int N, bool theta_copy) {
    if (kind == Totalization::hofix_zp || kind == Totalization::hoorb_zp)
        return zp_totalization(x.restrict_to_zp(), kind, N);
    if (N < 0) throw std::invalid_argument("equivariant_totalization: N must be nonnegative");
    auto ns = compose(norm_operator(x.tau, x.p), x.sigma);
    int dt = kind == Totalization::hofix_ts ? 1 : -1;
    std::vector<SeriesTerm> terms{{0, 0, dt, ns, false, 1}};
    if (theta_copy) terms.push_back({1, 1, dt, ns, false, 1});
    return SeriesComplex::build(x.complex, shape_for(kind, N, theta_copy), terms,
                                totalization_window(*x.complex, kind, N));
}

ChainMap totalization_map(const SeriesComplex& source, const SeriesComplex& target, const ChainMap& f) {
    if (f.shift() != 0) throw std::invalid_argument("totalization_map: f must have degree 0");
    std::vector<SeriesTerm> terms{{0, 0, 0, f, false, 1}};
    if (source.shape().theta) terms.push_back({1, 1, 0, f, false, 1});
    return source.map_to(target, 0, terms);
}

GysinMaps gysin_maps(const TauSigmaComplex& x, int N) {
    if (auto r = check_tau_sigma_complex(x); !r.ok) throw std::invalid_argument("gysin_maps: " + r.detail);
    const auto& F = x.complex->field();
    auto fixed_circle = equivariant_totalization(x, Totalization::hofix_ts, N, true);
    auto fixed_zp = equivariant_totalization(x, Totalization::hofix_zp, N);
    auto orbit_zp = equivariant_totalization(x, Totalization::hoorb_zp, N);
    auto orbit_circle = equivariant_totalization(x, Totalization::hoorb_ts, N, true);
    auto id = operator_identity(x.complex);
    auto tail = compose(tau_minus_one_power(x.tau, x.p - 2), x.sigma);
    auto phi = fixed_circle.map_to(fixed_zp, 0, {{0, 0, 0, id, false, 1},
                                                 {0, 1, 0, x.sigma, true, F.neg(1)},
                                                 {1, 1, 0, id, false, 1},
                                                 {1, 0, 1, tail, true, F.neg(1)}});
    auto phi_tilde = orbit_zp.map_to(orbit_circle, 0, {{0, 0, 0, id, false, 1},
                                                        {0, 1, -1, tail, true, 1},
                                                        {1, 1, 0, id, false, 1},
                                                        {1, 0, 0, x.sigma, true, 1}});
    auto pr = verify_chain_map(phi, MapCheck::quasi_iso);
    auto tr = verify_chain_map(phi_tilde, MapCheck::quasi_iso);
    return {std::move(fixed_circle), std::move(fixed_zp), std::move(orbit_zp), std::move(orbit_circle),
            std::move(phi),          std::move(phi_tilde), std::move(pr),      std::move(tr)};
}

CheckReport check_gysin_naturality(const ModuleMorphism& f, int N) {
    if (auto r = check_module_morphism(f); !r.ok) return r;
    auto gx = gysin_maps(f.source, N);
    auto gy = gysin_maps(f.target, N);
    auto fc = totalization_map(gx.fixed_circle, gy.fixed_circle, f.map);
    auto fz = totalization_map(gx.fixed_zp, gy.fixed_zp, f.map);
    if (!operators_equal(compose(gy.phi, fc), compose(fz, gx.phi)))
        return {false, "phi o hofix(f) != hofix(f) o phi", std::nullopt};
    auto oz = totalization_map(gx.orbit_zp, gy.orbit_zp, f.map);
    auto oc = totalization_map(gx.orbit_circle, gy.orbit_circle, f.map);
    if (!operators_equal(compose(gy.phi_tilde, oz), compose(oc, gx.phi_tilde)))
        return {false, "phi~ o hoorb(f) != hoorb(f) o phi~", std::nullopt};
    return {true, "naturality squares commute", std::nullopt};
}

OrbitOperators orbit_operators(const ZpComplex& x, int N) {
    auto s = equivariant_totalization(x, Totalization::hoorb_zp, N);
    const auto& F = x.complex->field();
    auto id = operator_identity(x.complex);
    auto u = s.map_to(s, 2, {{0, 0, -1, id, false, 1}, {1, 1, -1, id, false, 1}});
    auto eta = s.map_to(s, 1, {{0, 1, -1, tau_minus_one_power(x.tau, x.p - 2), true, 1}, {1, 0, 0, id, true, F.neg(1)}});
    return {std::move(s), std::move(u), std::move(eta)};
}

bool Prop15Report::all_agree() const {
    return std::all_of(rows.begin(), rows.end(), [](const Prop15Row& r) { return r.agree(); });
}

Prop15Report prop15_report(const AInfAlgebra& a, int p, int L, int N) {
    if (a.field().p() != static_cast<std::uint32_t>(p))
        throw std::invalid_argument("prop15_report: p must equal the characteristic of the algebra's field");
    Prop15Report rep;
    rep.p = p;
    rep.L = L;
    rep.N = N;
    auto unit = check_cohomological_unit(a);
    rep.cohomologically_unital = unit.cohomologically_unital;

    auto q_zp = excluded_top_pfold(a, p, L);
    if (!q_zp) {
        rep.window = DegreeWindow::none();
        rep.note = "no stable window: some basis element has reduced degree >= 0 or the grading is Z/2";
        return rep;
    }
    // Both complexes are cut from below just under the degrees that matter.
    int zp_floor = *q_zp + 2 * N + 2;
    auto zp = zp_equivariant_complex(a, p, WordTruncation{L, zp_floor}, N);
    DegreeWindow wz = zp.complex()->window();
    if (wz.empty()) {
        rep.window = wz;
        rep.note = "no stable window for the Z/p side";
        return rep;
    }
    int L1 = L;
    while (*excluded_top_cc(a, L1) + 2 * N + 2 > wz.lo - 1) ++L1;
    auto circle = negative_cyclic_complex(a, WordTruncation{L1, wz.lo - 2}, N);
    DegreeWindow wc = circle.complex()->window();
    auto top = circle.complex()->basis().max_degree();
    // Above the top degree the truncated circle complex is honestly zero.
    auto trusted = [&](int n) { return wc.contains(n) || (top && n > *top && !wc.empty() && n >= wc.lo); };

    auto hz = homology(*zp.complex(), wz);
    auto hc = homology(*circle.complex(), {wz.lo - 1, wz.hi});
    std::optional<int> lo, hi;
    for (int n = wz.lo; n <= wz.hi; ++n) {
        if (!trusted(n) || !trusted(n - 1)) {
            if (lo) break;
            continue;
        }
        if (!lo) lo = n;
        hi = n;
        rep.rows.push_back({n, hz.dim(n), hc.dim(n), hc.dim(n - 1)});
    }
    rep.window = lo ? DegreeWindow{*lo, *hi} : DegreeWindow::none();
    rep.note = "compared H^n(CC^{Z/p}) with H^n(CC^{S^1}) + H^{n-1}(CC^{S^1}) at L = " + std::to_string(L) +
               " (circle side L = " + std::to_string(L1) + "), N = " + std::to_string(N);
    if (!rep.cohomologically_unital) rep.note += "; hypothesis fails (not cohomologically unital), agreement not claimed";
    if (rep.window.empty()) rep.note += "; no common stable window";
    return rep;
}

}  // namespace cychom
