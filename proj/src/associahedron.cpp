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

#include "cychom/associahedron.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <stdexcept>

#include "cychom/keyed.hpp"

namespace cychom {

namespace {

// Parsed tree: node 0 is the root; kids empty for leaves and the unit.
struct Arena {
    std::vector<char> kind;  // 'x' leaf, '1' unit, 'v' vertex
    std::vector<std::vector<int>> kids;
};

int parse_node(std::string_view s, std::size_t& pos, Arena& a) {
    if (pos >= s.size()) throw std::invalid_argument("associahedron: truncated tree text");
    const int id = static_cast<int>(a.kind.size());
    const char c = s[pos++];
    if (c == 'x' || c == '1') {
        a.kind.push_back(c);
        a.kids.emplace_back();
        return id;
    }
    if (c != '(') throw std::invalid_argument(std::string("associahedron: unexpected '") + c + "' in tree text");
    a.kind.push_back('v');
    a.kids.emplace_back();
    std::vector<int> kids;
    while (pos < s.size() && s[pos] != ')') kids.push_back(parse_node(s, pos, a));
    if (pos >= s.size()) throw std::invalid_argument("associahedron: unbalanced parentheses");
    ++pos;
    if (kids.size() < 2) throw std::invalid_argument("associahedron: unstable vertex with fewer than two children");
    a.kids[id] = std::move(kids);
    return id;
}

Arena parse_arena(std::string_view s) {
    Arena a;
    std::size_t pos = 0;
    parse_node(s, pos, a);
    if (pos != s.size()) throw std::invalid_argument("associahedron: trailing characters in tree text");
    for (std::size_t i = 0; i < a.kind.size(); ++i)
        if (a.kind[i] == '1' && a.kind.size() > 1) throw std::invalid_argument("associahedron: unit inside a tree");
    return a;
}

std::string encode(const Arena& a, int node) {
    if (a.kind[node] != 'v') return std::string(1, a.kind[node]);
    std::string s = "(";
    for (int k : a.kids[node]) s += encode(a, k);
    return s + ")";
}

// Preorder list of all nodes.
void preorder(const Arena& a, int node, std::vector<int>& out) {
    out.push_back(node);
    for (int k : a.kids[node]) preorder(a, k, out);
}

int leaf_count(const Arena& a, int node) {
    if (a.kind[node] == 'x') return 1;
    int n = 0;
    for (int k : a.kids[node]) n += leaf_count(a, k);
    return n;
}

// Number of vertices of odd arity in the subtree.
int odd_vertices(const Arena& a, int node) {
    int n = a.kind[node] == 'v' && a.kids[node].size() % 2 == 1 ? 1 : 0;
    for (int k : a.kids[node]) n += odd_vertices(a, k);
    return n;
}

int count_leaves_in_code(const std::string& code) { return static_cast<int>(std::count(code.begin(), code.end(), 'x')); }

}  // namespace

// ---------------------------------------------------------------- trees

PlanarTree PlanarTree::corolla(int d) {
    if (d < 1) throw std::invalid_argument("associahedron: corolla needs d >= 1");
    if (d == 1) return identity();
    return PlanarTree("(" + std::string(d, 'x') + ")");
}

PlanarTree PlanarTree::vertex(const std::vector<PlanarTree>& children) {
    if (children.size() < 2) throw std::invalid_argument("associahedron: unstable vertex with fewer than two children");
    std::string code = "(";
    for (const auto& c : children) {
        if (c.is_unit()) throw std::invalid_argument("associahedron: unit inside a tree");
        code += c.code_;
    }
    return PlanarTree(code + ")");
}

PlanarTree PlanarTree::parse(std::string_view text) {
    std::string compact;
    for (char c : text)
        if (c != ' ') compact.push_back(c);
    return PlanarTree(encode(parse_arena(compact), 0));
}

int PlanarTree::leaves() const { return count_leaves_in_code(code_); }

int PlanarTree::vertices() const { return static_cast<int>(std::count(code_.begin(), code_.end(), '(')); }

int PlanarTree::degree() const {
    if (is_unit() || is_identity()) return 0;
    return leaves() - 2 - internal_edges();
}

std::vector<int> PlanarTree::vertex_arities() const {
    const Arena a = parse_arena(code_);
    std::vector<int> order, out;
    preorder(a, 0, order);
    for (int v : order)
        if (a.kind[v] == 'v') out.push_back(static_cast<int>(a.kids[v].size()));
    return out;
}

// ---------------------------------------------------------------- chains

CellChain::CellChain(PrimeField field, const PlanarTree& t, Scalar coeff) : field_(field) { add(t, coeff); }

void CellChain::add(const PlanarTree& t, Scalar coeff) {
    if (coeff == 0) return;
    auto [it, fresh] = terms_.try_emplace(t, coeff);
    if (!fresh) {
        it->second = field_.add(it->second, coeff);
        if (it->second == 0) terms_.erase(it);
    }
}

CellChain& CellChain::operator+=(const CellChain& other) {
    for (const auto& [t, c] : other.terms_) add(t, c);
    return *this;
}

CellChain CellChain::scaled(Scalar c) const {
    CellChain out(field_);
    for (const auto& [t, v] : terms_) out.add(t, field_.mul(v, c));
    return out;
}

std::string CellChain::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [t, c] : terms_) {
        const auto v = field_.lift(c);
        s += (s.empty() ? (v < 0 ? "-" : "") : (v < 0 ? " - " : " + "));
        if (v != 1 && v != -1) s += std::to_string(v < 0 ? -v : v) + "*";
        s += t.to_string();
    }
    return s;
}

std::map<int, std::vector<PlanarTree>> enumerate_cells(int d) {
    if (d < 1 || d > 7) throw std::out_of_range("associahedron: size guard exceeded, d must be in 1..7");
    // trees[k] = all stable trees with k leaves, as codes
    std::vector<std::vector<std::string>> trees(d + 1);
    trees[1] = {"x"};
    for (int k = 2; k <= d; ++k) {
        // root with children of leaf counts c_1 + ... + c_r = k, r >= 2
        std::vector<std::string> out;
        std::function<void(int, int, std::string)> rec = [&](int left, int used, std::string acc) {
            if (left == 0) {
                if (used >= 2) out.push_back("(" + acc + ")");
                return;
            }
            for (int c = 1; c <= left; ++c) {
                if (used == 0 && c == k) continue;
                for (const auto& sub : trees[c]) rec(left - c, used + 1, acc + sub);
            }
        };
        rec(k, 0, "");
        trees[k] = std::move(out);
    }
    std::map<int, std::vector<PlanarTree>> by_degree;
    for (const auto& code : trees[d]) {
        PlanarTree t = PlanarTree::parse(code);
        by_degree[t.degree()].push_back(t);
    }
    for (auto& [deg, list] : by_degree) std::sort(list.begin(), list.end());
    return by_degree;
}

namespace {

// Replaces the subtree at `node` of `a` by the code `replacement`.
std::string encode_replacing(const Arena& a, int node, int target, const std::string& replacement) {
    if (node == target) return replacement;
    if (a.kind[node] != 'v') return std::string(1, a.kind[node]);
    std::string s = "(";
    for (int k : a.kids[node]) s += encode_replacing(a, k, target, replacement);
    return s + ")";
}

}  // namespace

CellChain boundary(const PlanarTree& t, const PrimeField& F) {
    CellChain out(F);
    if (t.is_unit() || t.is_identity()) return out;
    const Arena a = parse_arena(t.to_string());
    std::vector<int> order;
    preorder(a, 0, order);
    int before = 0;  // parity of vertex arities preceding the current vertex in preorder
    for (int v : order) {
        if (a.kind[v] != 'v') continue;
        const auto& kids = a.kids[v];
        const int d = static_cast<int>(kids.size());
        for (int s = 2; s <= d - 1; ++s)
            for (int r = 0; r + s <= d; ++r) {
                const int t_after = d - s - r;
                // The inner vertex overtakes the vertices of the first r subtrees.
                int overtaken = 0;
                for (int i = 0; i < r; ++i) overtaken += odd_vertices(a, kids[i]);
                const long long e = before + 1 + r + static_cast<long long>(s) * t_after +
                                    static_cast<long long>(s % 2) * overtaken;
                std::string outer = "(";
                for (int i = 0; i < r; ++i) outer += encode(a, kids[i]);
                outer += "(";
                for (int i = r; i < r + s; ++i) outer += encode(a, kids[i]);
                outer += ")";
                for (int i = r + s; i < d; ++i) outer += encode(a, kids[i]);
                outer += ")";
                out.add(PlanarTree::parse(encode_replacing(a, 0, v, outer)), F.sign(e));
            }
        before += d;
    }
    return out;
}

CellChain boundary(const CellChain& c) {
    CellChain out(c.field());
    for (const auto& [t, v] : c.terms()) out += boundary(t, c.field()).scaled(v);
    return out;
}

CellChain graft(const PlanarTree& a, int slot, const PlanarTree& b, const PrimeField& F, bool unital) {
    if (a.is_unit()) throw std::invalid_argument("associahedron: the unit has no inputs to graft into");
    if (slot < 1 || slot > a.leaves())
        throw std::out_of_range("associahedron: slot " + std::to_string(slot) + " outside 1.." +
                                std::to_string(a.leaves()));
    CellChain out(F);
    if (b.is_unit() && !unital) throw std::invalid_argument("associahedron: unit grafted without the unital flag");
    const Arena arena = parse_arena(a.to_string());
    std::vector<int> order;
    preorder(arena, 0, order);
    int seen = 0, leaf = -1;
    std::size_t leaf_pos = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        if (arena.kind[order[i]] == 'x' && ++seen == slot) {
            leaf = order[i];
            leaf_pos = i;
            break;
        }
    if (b.is_unit()) {
        if (a.is_identity()) {
            out.add(PlanarTree::unit(), 1);
            return out;
        }
        // Parent of the leaf; only a trivalent (two-child) vertex survives, by dropping it.
        int parent = -1;
        for (std::size_t v = 0; v < arena.kind.size(); ++v)
            for (int k : arena.kids[v])
                if (k == leaf) parent = static_cast<int>(v);
        if (arena.kids[parent].size() != 2) return out;
        const int other = arena.kids[parent][0] == leaf ? arena.kids[parent][1] : arena.kids[parent][0];
        out.add(PlanarTree::parse(encode_replacing(arena, 0, parent, encode(arena, other))), 1);
        return out;
    }
    int odd_after = 0;
    for (std::size_t i = leaf_pos + 1; i < order.size(); ++i)
        if (arena.kind[order[i]] == 'v' && arena.kids[order[i]].size() % 2 == 1) ++odd_after;
    const Arena barena = parse_arena(b.to_string());
    const int odd_b = odd_vertices(barena, 0);
    out.add(PlanarTree::parse(encode_replacing(arena, 0, leaf, b.to_string())), F.sign(odd_after * odd_b));
    return out;
}

CellChain graft(const CellChain& a, int slot, const CellChain& b, bool unital) {
    CellChain out(a.field());
    for (const auto& [s, cs] : a.terms())
        for (const auto& [t, ct] : b.terms()) out += graft(s, slot, t, a.field(), unital).scaled(a.field().mul(cs, ct));
    return out;
}

CellChain compose_all(const CellChain& a, const std::vector<CellChain>& inputs, bool unital) {
    CellChain acc = a;
    int offset = 0;
    for (const auto& in : inputs) {
        if (in.is_zero()) return CellChain(a.field());
        const int width = in.terms().begin()->first.leaves();
        acc = graft(acc, offset + 1, in, unital);
        offset += width;
    }
    return acc;
}

// ---------------------------------------------------------------- evaluation

namespace {

std::size_t power(std::size_t base, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

std::vector<Elem> decode_tuple(std::size_t index, int arity, std::size_t dim) {
    std::vector<Elem> t(arity);
    for (int i = arity - 1; i >= 0; --i) {
        t[i] = static_cast<Elem>(index % dim);
        index /= dim;
    }
    return t;
}

std::size_t encode_tuple(const std::vector<Elem>& t, std::size_t dim) {
    std::size_t index = 0;
    for (Elem e : t) index = index * dim + e;
    return index;
}

Multilinear zero_map(std::size_t dim, int arity, int degree) {
    return {arity, degree, dim, std::vector<std::vector<Scalar>>(power(dim, arity), std::vector<Scalar>(dim, 0))};
}

Multilinear identity_map(const AInfAlgebra& a) {
    auto f = zero_map(a.dim(), 1, 0);
    for (std::size_t i = 0; i < a.dim(); ++i) f.table[i][i] = 1;
    return f;
}

Multilinear unit_map(const AInfAlgebra& a) {
    if (!a.unit()) throw std::invalid_argument("associahedron: the unit needs a strictly unital algebra");
    auto f = zero_map(a.dim(), 0, 0);
    f.table[0][*a.unit()] = 1;
    return f;
}

Multilinear add_scaled(Multilinear f, const Multilinear& g, Scalar c, const PrimeField& F) {
    for (std::size_t i = 0; i < f.table.size(); ++i)
        for (std::size_t j = 0; j < f.dim; ++j) f.table[i][j] = F.add(f.table[i][j], F.mul(c, g.table[i][j]));
    return f;
}

}  // namespace

Multilinear structure_map(const AInfAlgebra& a, int d) {
    if (d < 1) throw std::invalid_argument("associahedron: structure maps start at arity 1");
    if (d > a.arity_bound())
        throw std::invalid_argument("associahedron: arity " + std::to_string(d) + " exceeds the algebra's bound " +
                                    std::to_string(a.arity_bound()));
    auto f = zero_map(a.dim(), d, 2 - d);
    for (std::size_t idx = 0; idx < f.table.size(); ++idx) {
        const auto t = decode_tuple(idx, d, a.dim());
        for (const auto& term : a.mu(t)) f.table[idx][term.out] = a.field().add(f.table[idx][term.out], term.coeff);
    }
    return f;
}

Multilinear partial_compose(const AInfAlgebra& a, const Multilinear& f, int slot, const Multilinear& g) {
    if (slot < 1 || slot > f.arity) throw std::out_of_range("associahedron: slot outside the operation");
    const PrimeField& F = a.field();
    const std::size_t dim = a.dim();
    const int arity = f.arity + g.arity - 1;
    auto h = zero_map(dim, arity, f.degree + g.degree);
    for (std::size_t idx = 0; idx < h.table.size(); ++idx) {
        const auto x = decode_tuple(idx, arity, dim);
        long long before = 0;
        for (int l = 0; l < slot - 1; ++l) before += a.degree(x[l]);
        const Scalar sign = F.sign(static_cast<long long>(g.degree) * before);
        std::vector<Elem> inner(x.begin() + (slot - 1), x.begin() + (slot - 1 + g.arity));
        const auto& w = g.table[encode_tuple(inner, dim)];
        std::vector<Elem> outer(x.begin(), x.begin() + (slot - 1));
        outer.push_back(0);
        outer.insert(outer.end(), x.begin() + (slot - 1 + g.arity), x.end());
        for (std::size_t b = 0; b < dim; ++b) {
            if (w[b] == 0) continue;
            outer[slot - 1] = static_cast<Elem>(b);
            const auto& v = f.table[encode_tuple(outer, dim)];
            const Scalar c = F.mul(sign, w[b]);
            for (std::size_t j = 0; j < dim; ++j) h.table[idx][j] = F.add(h.table[idx][j], F.mul(c, v[j]));
        }
    }
    return h;
}

Multilinear end_differential(const AInfAlgebra& a, const Multilinear& f) {
    const PrimeField& F = a.field();
    const auto m1 = structure_map(a, 1);
    auto out = partial_compose(a, m1, 1, f);
    const Scalar c = F.neg(F.sign(f.degree));
    for (int i = 1; i <= f.arity; ++i) out = add_scaled(out, partial_compose(a, f, i, m1), c, F);
    out.degree = f.degree + 1;
    return out;
}

namespace {

Multilinear evaluate_node(const AInfAlgebra& a, const Arena& arena, int node) {
    if (arena.kind[node] == 'x') return identity_map(a);
    if (arena.kind[node] == '1') return unit_map(a);
    const auto& kids = arena.kids[node];
    Multilinear acc = structure_map(a, static_cast<int>(kids.size()));
    int offset = 0;
    for (int k : kids) {
        acc = partial_compose(a, acc, offset + 1, evaluate_node(a, arena, k));
        offset += leaf_count(arena, k);
    }
    return acc;
}

}  // namespace

Multilinear evaluate_on_algebra(const AInfAlgebra& a, const PlanarTree& t) {
    return evaluate_node(a, parse_arena(t.to_string()), 0);
}

Multilinear evaluate_on_algebra(const AInfAlgebra& a, const CellChain& c) {
    if (c.is_zero()) throw std::invalid_argument("associahedron: cannot infer the arity of the zero chain");
    const auto& first = c.terms().begin()->first;
    auto out = zero_map(a.dim(), first.leaves(), -first.degree());
    for (const auto& [t, v] : c.terms()) out = add_scaled(out, evaluate_on_algebra(a, t), v, a.field());
    return out;
}

CheckReport check_operad_map(const AInfAlgebra& a, int max_leaves) {
    const PrimeField& F = a.field();
    const auto m1 = structure_map(a, 1);
    if (partial_compose(a, m1, 1, m1).table != zero_map(a.dim(), 1, 0).table)
        return {false, "m_1 o m_1 != 0, so End(A) is not a dg operad", std::nullopt};
    std::vector<std::vector<PlanarTree>> trees(max_leaves + 1);
    for (int d = 1; d <= max_leaves; ++d)
        for (auto& [deg, list] : enumerate_cells(d)) trees[d].insert(trees[d].end(), list.begin(), list.end());
    std::map<PlanarTree, Multilinear> value;
    for (int d = 1; d <= max_leaves; ++d)
        for (const auto& t : trees[d]) value.emplace(t, evaluate_on_algebra(a, t));
    for (int d = 1; d <= max_leaves; ++d)
        for (const auto& t : trees[d]) {
            const auto db = boundary(t, F);
            auto lhs = zero_map(a.dim(), d, -t.degree() + 1);
            for (const auto& [s, c] : db.terms()) lhs = add_scaled(lhs, value.at(s), c, F);
            if (lhs.table != end_differential(a, value.at(t)).table)
                return {false, "evaluate(boundary " + t.to_string() + ") != [m_1, evaluate(" + t.to_string() + ")]",
                        std::nullopt};
        }
    for (int d1 = 1; d1 <= max_leaves; ++d1)
        for (int d2 = 1; d1 + d2 - 1 <= max_leaves; ++d2)
            for (const auto& s : trees[d1])
                for (const auto& t : trees[d2])
                    for (int i = 1; i <= d1; ++i) {
                        const auto g = graft(s, i, t, F);
                        auto lhs = zero_map(a.dim(), d1 + d2 - 1, 0);
                        for (const auto& [u, c] : g.terms()) lhs = add_scaled(lhs, value.at(u), c, F);
                        if (lhs.table != partial_compose(a, value.at(s), i, value.at(t)).table)
                            return {false, "grafting " + s.to_string() + " o_" + std::to_string(i) + " " + t.to_string() +
                                               " is not preserved",
                                    std::nullopt};
                    }
    return {true, "evaluation respects boundary and grafting up to " + std::to_string(max_leaves) + " leaves",
            std::nullopt};
}

// ---------------------------------------------------------------- semidirect

std::vector<std::vector<int>> ordered_fibres(const CyclicMorphism& f) {
    const int n = f.source();
    const int sigma = f.rotation_index();
    const int start = sigma == 0 ? 0 : sigma - (n + 1);
    std::vector<std::vector<int>> fibres(f.target() + 1);
    for (int i = start; i <= start + n; ++i)
        fibres[static_cast<std::size_t>(f.at(i))].push_back(((i % (n + 1)) + (n + 1)) % (n + 1));
    return fibres;
}

Decorated identity_decoration(const CyclicMorphism& f) {
    Decorated d{f, {}};
    for (const auto& fibre : ordered_fibres(f)) {
        if (fibre.size() > 1) throw std::invalid_argument("associahedron: identity decoration needs fibres of size <= 1");
        d.cells.push_back(fibre.empty() ? PlanarTree::unit() : PlanarTree::identity());
    }
    return d;
}

SemidirectChain compose(const SemidirectChain& g, const SemidirectChain& f, const PrimeField& F) {
    SemidirectChain out;
    for (const auto& [gd, gc] : g)
        for (const auto& [fd, fc] : f) {
            const auto h = compose(gd.map, fd.map);
            const auto gfib = ordered_fibres(gd.map);
            const int r = gd.map.target();
            // Regroup S_0..S_r T_0..T_m into S_0 T_{g^{-1}(0)} S_1 T_{g^{-1}(1)} ...
            std::vector<std::pair<int, int>> order;  // (original position, degree)
            for (int j = 0; j <= r; ++j) {
                order.emplace_back(j, gd.cells[j].degree());
                for (int i : gfib[j]) order.emplace_back(r + 1 + i, fd.cells[i].degree());
            }
            long long e = 0;
            for (std::size_t x = 0; x < order.size(); ++x)
                for (std::size_t y = x + 1; y < order.size(); ++y)
                    if (order[x].first > order[y].first) e += static_cast<long long>(order[x].second) * order[y].second;
            std::vector<CellChain> pieces;
            for (int j = 0; j <= r; ++j) {
                std::vector<CellChain> inputs;
                for (int i : gfib[j]) inputs.emplace_back(F, fd.cells[i]);
                pieces.push_back(compose_all(CellChain(F, gd.cells[j]), inputs, true));
            }
            // Expand the tensor product of the pieces.
            std::vector<std::pair<std::vector<PlanarTree>, Scalar>> acc{{{}, F.mul(F.sign(e), F.mul(gc, fc))}};
            for (const auto& piece : pieces) {
                std::vector<std::pair<std::vector<PlanarTree>, Scalar>> next;
                for (const auto& [cells, c] : acc)
                    for (const auto& [t, v] : piece.terms()) {
                        auto more = cells;
                        more.push_back(t);
                        next.emplace_back(std::move(more), F.mul(c, v));
                    }
                acc = std::move(next);
            }
            for (auto& [cells, c] : acc) {
                Decorated d{h, std::move(cells)};
                auto [it, fresh] = out.try_emplace(d, c);
                if (!fresh) {
                    it->second = F.add(it->second, c);
                    if (it->second == 0) out.erase(it);
                }
            }
        }
    return out;
}

namespace {

std::string decorated_key(const Decorated& d) {
    std::string key;
    for (int v : d.map.lift()) key.push_back(static_cast<char>(v));
    for (const auto& t : d.cells) key += ";" + t.to_string();
    return key;
}

}  // namespace

SemidirectHom semidirect_hom(int n, int m, const PrimeField& F, bool arrow_only) {
    if (n < 0 || m < 0 || n > 4 || m > 4) throw std::out_of_range("associahedron: size guard exceeded, n, m <= 4");
    SemidirectHom out;
    out.n = n;
    out.m = m;
    out.arrow_only = arrow_only;
    out.maps = enumerate_hom(n, m, arrow_only);
    std::vector<std::vector<PlanarTree>> trees(n + 2);
    trees[0] = {PlanarTree::unit()};
    for (int d = 1; d <= n + 1; ++d)
        for (auto& [deg, list] : enumerate_cells(d)) trees[d].insert(trees[d].end(), list.begin(), list.end());
    auto by_key = std::make_shared<std::map<std::string, Decorated>>();
    auto basis = std::make_shared<KeyedBasis>();
    for (const auto& f : out.maps) {
        const auto fibres = ordered_fibres(f);
        std::vector<PlanarTree> cells;
        std::function<void(std::size_t, int)> rec = [&](std::size_t j, int degree) {
            if (j == fibres.size()) {
                Decorated d{f, cells};
                auto key = decorated_key(d);
                basis->insert(-degree, key);
                by_key->emplace(std::move(key), std::move(d));
                return;
            }
            for (const auto& t : trees[fibres[j].size()]) {
                cells.push_back(t);
                rec(j + 1, degree + t.degree());
                cells.pop_back();
            }
        };
        rec(0, 0);
    }
    auto d = [&F, by_key](const std::string& key, Terms& terms) {
        const Decorated& x = by_key->at(key);
        int before = 0;
        for (std::size_t i = 0; i < x.cells.size(); ++i) {
            const auto db = boundary(x.cells[i], F);
            for (const auto& [t, c] : db.terms()) {
                Decorated y = x;
                y.cells[i] = t;
                terms.emplace_back(decorated_key(y), F.mul(c, F.sign(before)));
            }
            before += x.cells[i].degree();
        }
    };
    auto namer = [by_key](const std::string& key) {
        const Decorated& x = by_key->at(key);
        std::string s = x.map.to_string() + " @";
        for (const auto& t : x.cells) s += " " + t.to_string();
        return s;
    };
    out.complex = std::make_shared<const ChainComplex>(build_complex(F, basis, d, {}, namer));
    for (int deg : basis->degrees())
        for (std::uint32_t i = 0; i < basis->dim(deg); ++i) out.index.emplace(by_key->at(basis->key(deg, i)), i);

    auto discrete_basis = std::make_shared<KeyedBasis>();
    for (const auto& f : out.maps) {
        std::string key;
        for (int v : f.lift()) key.push_back(static_cast<char>(v));
        discrete_basis->insert(0, key);
    }
    auto maps = out.maps;
    auto discrete_namer = [maps](const std::string& key) {
        std::vector<int> lift(key.begin(), key.end());
        return CyclicMorphism(lift, maps.front().target()).to_string();
    };
    out.discrete = std::make_shared<const ChainComplex>(
        build_complex(F, discrete_basis, [](const std::string&, Terms&) {}, {}, discrete_namer));
    auto augmentation = [by_key](const std::string& key, Terms& terms) {
        const Decorated& x = by_key->at(key);
        for (const auto& t : x.cells)
            if (t.degree() != 0) return;
        std::string target;
        for (int v : x.map.lift()) target.push_back(static_cast<char>(v));
        terms.emplace_back(target, 1);
    };
    out.augmentation = std::make_shared<const ChainMap>(out.complex, out.discrete, 0,
                                                        build_components(F, *basis, *discrete_basis, 0, augmentation,
                                                                         true));
    return out;
}

}  // namespace cychom
