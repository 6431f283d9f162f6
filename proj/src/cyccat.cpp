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

#include "cychom/cyccat.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cychom/keyed.hpp"

namespace cychom {

namespace {

long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

long long mod(long long a, long long b) { return a - floor_div(a, b) * b; }

void require_size(bool ok, const char* what) {
    if (!ok) throw std::out_of_range(std::string("cyccat: size guard exceeded in ") + what);
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

// All nondecreasing sequences x_0 = first <= x_1 <= ... <= x_n <= bound(x_0).
template <class Emit>
void nondecreasing(int n, int first_lo, int first_hi, int top_offset, Emit&& emit) {
    std::vector<int> x(n + 1);
    auto rec = [&](auto& self, int i, int lo, int hi) -> void {
        if (i > n) {
            emit(x);
            return;
        }
        for (int v = lo; v <= hi; ++v) {
            x[i] = v;
            if (i == 0)
                self(self, 1, v, v + top_offset);
            else
                self(self, i + 1, v, hi);
        }
    };
    if (n == 0) {
        for (int v = first_lo; v <= first_hi; ++v) {
            x[0] = v;
            emit(x);
        }
        return;
    }
    rec(rec, 0, first_lo, first_hi);
}

}  // namespace

// ---------------------------------------------------------------- Lambda

CyclicMorphism::CyclicMorphism(std::vector<int> lift, int target) : lift_(std::move(lift)), target_(target) {
    if (lift_.empty() || target_ < 0) throw std::invalid_argument("cyccat: empty source or negative target");
    if (lift_[0] < 0 || lift_[0] > target_)
        throw std::invalid_argument("cyccat: lift not normalized, F(0) = " + std::to_string(lift_[0]));
    for (std::size_t i = 1; i < lift_.size(); ++i)
        if (lift_[i] < lift_[i - 1]) throw std::invalid_argument("cyccat: lift is not monotone");
    if (lift_.back() > lift_[0] + target_ + 1) throw std::invalid_argument("cyccat: lift winds more than once");
}

CyclicMorphism CyclicMorphism::from_blocks(int rotation, const std::vector<int>& blocks) {
    if (blocks.empty()) throw std::invalid_argument("cyccat: no blocks");
    int size = 0;
    for (int b : blocks) {
        if (b < 0) throw std::invalid_argument("cyccat: negative block size");
        size += b;
    }
    if (size == 0) throw std::invalid_argument("cyccat: blocks cover no points");
    const int n = size - 1, m = static_cast<int>(blocks.size()) - 1;
    if (rotation < 0 || rotation > n) throw std::invalid_argument("cyccat: rotation out of range");
    std::vector<int> value;  // block index along [n]_sigma
    for (int j = 0; j <= m; ++j) value.insert(value.end(), blocks[j], j);
    const int start = rotation == 0 ? 0 : rotation - (n + 1);
    std::vector<int> lift(n + 1);
    for (int i = 0; i <= n; ++i) {
        const int t = i - start;
        lift[i] = t <= n ? value[t] : value[t - (n + 1)] + m + 1;
    }
    return CyclicMorphism(std::move(lift), m);
}

CyclicMorphism CyclicMorphism::identity(int n) { return rotation(n, 0); }

CyclicMorphism CyclicMorphism::rotation(int n, int k) {
    if (n < 0) throw std::invalid_argument("cyccat: negative object");
    const int shift = static_cast<int>(mod(k, n + 1));
    std::vector<int> lift(n + 1);
    std::iota(lift.begin(), lift.end(), shift);
    return CyclicMorphism(std::move(lift), n);
}

long long CyclicMorphism::at(long long i) const {
    const long long period = source() + 1;
    const long long q = floor_div(i, period);
    return lift_[static_cast<std::size_t>(i - q * period)] + q * (target_ + 1);
}

int CyclicMorphism::rotation_index() const {
    const int n = source();
    int start = 0;
    while (start > -n && at(start - 1) >= 0) --start;
    return static_cast<int>(mod(start, n + 1));
}

std::vector<int> CyclicMorphism::blocks() const {
    const int n = source();
    const int sigma = rotation_index();
    const int start = sigma == 0 ? 0 : sigma - (n + 1);
    std::vector<int> b(target_ + 1, 0);
    for (int i = start; i <= start + n; ++i) ++b[static_cast<std::size_t>(at(i))];
    return b;
}

bool CyclicMorphism::surjective() const {
    std::vector<bool> hit(target_ + 1, false);
    for (int i = 0; i <= source(); ++i) hit[static_cast<std::size_t>(mod(lift_[i], target_ + 1))] = true;
    return std::all_of(hit.begin(), hit.end(), [](bool h) { return h; });
}

bool CyclicMorphism::is_automorphism() const { return source() == target_ && surjective(); }

std::string CyclicMorphism::to_string() const {
    return "[" + std::to_string(source()) + "]->[" + std::to_string(target_) + "] F=(" + join(lift_) + ")";
}

CyclicMorphism compose(const CyclicMorphism& g, const CyclicMorphism& f) {
    if (f.target() != g.source()) throw std::invalid_argument("cyccat: composing non-composable morphisms");
    const int l = g.target();
    std::vector<long long> h(f.source() + 1);
    for (int i = 0; i <= f.source(); ++i) h[i] = g.at(f.lift()[i]);
    const long long shift = floor_div(h[0], l + 1) * (l + 1);
    std::vector<int> lift(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) lift[i] = static_cast<int>(h[i] - shift);
    return CyclicMorphism(std::move(lift), l);
}

std::vector<CyclicMorphism> enumerate_hom(int n, int m, bool arrow_only) {
    require_size(n >= 0 && m >= 0 && n <= 6 && m <= 6, "enumerate_hom");
    std::vector<CyclicMorphism> out;
    nondecreasing(n, 0, m, m + 1, [&](const std::vector<int>& x) {
        CyclicMorphism f(x, m);
        if (!arrow_only || f.surjective()) out.push_back(std::move(f));
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CyclicMorphism> enumerate_hom_by_blocks(int n, int m, bool arrow_only) {
    require_size(n >= 0 && m >= 0 && n <= 6 && m <= 6, "enumerate_hom_by_blocks");
    std::vector<CyclicMorphism> out;
    std::vector<int> blocks(m + 1, 0);
    auto rec = [&](auto& self, int j, int left) -> void {
        if (j == m) {
            blocks[m] = left;
            if (arrow_only && std::find(blocks.begin(), blocks.end(), 0) != blocks.end()) return;
            for (int sigma = 0; sigma <= n; ++sigma) out.push_back(CyclicMorphism::from_blocks(sigma, blocks));
            return;
        }
        for (int b = 0; b <= left; ++b) {
            blocks[j] = b;
            self(self, j + 1, left - b);
        }
    };
    rec(rec, 0, n + 1);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::vector<CyclicMorphism> simplicial_hom(int n, int m, bool arrow_only) {
    std::vector<CyclicMorphism> out;
    nondecreasing(n, 0, 0, m + 1, [&](const std::vector<int>& x) {
        CyclicMorphism f(x, m);
        if (!arrow_only || f.surjective()) out.push_back(std::move(f));
    });
    return out;
}

}  // namespace

std::vector<CyclicMorphism> enumerate_simplicial_hom(int n, int m, bool arrow_only) {
    require_size(n >= 0 && m >= 0 && n <= 6 && m <= 6, "enumerate_simplicial_hom");
    return simplicial_hom(n, m, arrow_only);
}

std::vector<Decomposition> all_decompositions(const CyclicMorphism& f, RotationSide side) {
    std::vector<Decomposition> out;
    if (side == RotationSide::target) {
        const int m = f.target();
        for (int k = 0; k <= m; ++k) {
            auto g = compose(CyclicMorphism::rotation(m, -k), f);
            if (g.preserves_basepoint()) out.push_back({k, std::move(g)});
        }
    } else {
        const int n = f.source();
        for (int k = 0; k <= n; ++k) {
            auto g = compose(f, CyclicMorphism::rotation(n, -k));
            if (g.preserves_basepoint()) out.push_back({k, std::move(g)});
        }
    }
    return out;
}

Decomposition decompose(const CyclicMorphism& f, RotationSide side) {
    auto all = all_decompositions(f, side);
    if (all.size() != 1)
        throw std::domain_error("cyccat: " + f.to_string() + " has " + std::to_string(all.size()) +
                                " decompositions with the rotation on the " +
                                (side == RotationSide::target ? "target" : "source"));
    return std::move(all.front());
}

// ---------------------------------------------------------------- Delta

DeltaMorphism compose(const DeltaMorphism& g, const DeltaMorphism& f) {
    if (f.target != g.source) throw std::invalid_argument("cyccat: composing non-composable Delta maps");
    DeltaMorphism h{f.source, g.target, {}};
    for (int v : f.values) h.values.push_back(g.values[v]);
    return h;
}

DeltaMorphism joyal_dual(const CyclicMorphism& f) {
    if (!f.preserves_basepoint()) throw std::invalid_argument("cyccat: Joyal dual needs a basepoint preserving map");
    const int n = f.source(), m = f.target();
    DeltaMorphism phi{m, n, std::vector<int>(m + 1, 0)};
    for (int j = 0; j <= m; ++j)
        for (int i = 1; i <= n; ++i)
            if (f.lift()[i] <= j) ++phi.values[j];
    return phi;
}

CyclicMorphism joyal_dual(const DeltaMorphism& phi) {
    const int m = phi.source, n = phi.target;
    std::vector<int> lift(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        int j = 0;
        while (j <= m && phi.values[j] < i) ++j;
        lift[i] = j;  // m + 1 when never reached
    }
    return CyclicMorphism(std::move(lift), m);
}

DeltaMorphism ordinal_sum(const std::vector<DeltaMorphism>& parts) {
    DeltaMorphism out{-1, -1, {}};
    for (const auto& part : parts) {
        for (int v : part.values) out.values.push_back(v + out.target + 1);
        out.source += part.source + 1;
        out.target += part.target + 1;
    }
    return out;
}

// ---------------------------------------------------------------- p-cyclic

int point_count(const PObject& k) { return std::accumulate(k.begin(), k.end(), 0) + static_cast<int>(k.size()); }

std::vector<int> distinguished_points(const PObject& k) {
    std::vector<int> d(k.size());
    for (std::size_t s = 1; s < k.size(); ++s) d[s] = d[s - 1] + k[s - 1] + 1;
    return d;
}

PObject rotate_blocks(const PObject& k) {
    PObject r(k.size());
    for (std::size_t s = 0; s < k.size(); ++s) r[(s + 1) % k.size()] = k[s];
    return r;
}

namespace {

void check_object(const PObject& k) {
    if (k.size() < 2) throw std::invalid_argument("cyccat: p-cyclic objects need p >= 2 blocks");
    for (int v : k)
        if (v < 0) throw std::invalid_argument("cyccat: negative block length");
}

// Places per-block basepoint preserving maps after a rotation by r blocks.
CyclicMorphism assemble(const PObject& source, const PObject& target, int r,
                        const std::vector<const CyclicMorphism*>& parts) {
    const int p = static_cast<int>(source.size());
    const auto dt = distinguished_points(target);
    const int kt = point_count(target);
    std::vector<int> lift;
    lift.reserve(point_count(source));
    for (int s = 0; s < p; ++s) {
        const int arc = (s + r) % p;
        const int base = dt[arc] + ((s + r) >= p ? kt : 0);
        for (int t = 0; t <= source[s]; ++t) lift.push_back(base + parts[s]->lift()[t]);
    }
    return CyclicMorphism(std::move(lift), kt - 1);
}

// Every tuple of per-block maps for rotation r; calls emit(parts).
template <class Emit>
void for_each_block_tuple(const PObject& source, const PObject& target, int r, bool arrow_only, Emit&& emit) {
    const int p = static_cast<int>(source.size());
    std::vector<std::vector<CyclicMorphism>> choices(p);
    for (int s = 0; s < p; ++s) {
        choices[s] = simplicial_hom(source[s], target[(s + r) % p], arrow_only);
        if (choices[s].empty()) return;
    }
    std::vector<const CyclicMorphism*> parts(p);
    auto rec = [&](auto& self, int s) -> void {
        if (s == p) {
            emit(parts);
            return;
        }
        for (const auto& c : choices[s]) {
            parts[s] = &c;
            self(self, s + 1);
        }
    };
    rec(rec, 0);
}

std::vector<PCyclicMorphism> all_phom(const PObject& source, const PObject& target, bool arrow_only) {
    std::vector<PCyclicMorphism> out;
    const int p = static_cast<int>(source.size());
    for (int r = 0; r < p; ++r)
        for_each_block_tuple(source, target, r, arrow_only, [&](const std::vector<const CyclicMorphism*>& parts) {
            out.push_back(*PCyclicMorphism::make(source, target, assemble(source, target, r, parts)));
        });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::optional<PCyclicMorphism> PCyclicMorphism::make(PObject source, PObject target, CyclicMorphism map) {
    check_object(source);
    check_object(target);
    if (source.size() != target.size()) throw std::invalid_argument("cyccat: objects of different p");
    if (map.source() != point_count(source) - 1 || map.target() != point_count(target) - 1)
        throw std::invalid_argument("cyccat: underlying map has the wrong shape");
    const int p = static_cast<int>(source.size());
    const auto ds = distinguished_points(source), dt = distinguished_points(target);
    const int kt = point_count(target);
    auto pos = std::find(dt.begin(), dt.end(), map.lift()[0]);
    if (pos == dt.end()) return std::nullopt;
    const int r = static_cast<int>(pos - dt.begin());
    for (int s = 1; s < p; ++s)
        if (mod(map.at(ds[s]), kt) != dt[(s + r) % p]) return std::nullopt;
    return PCyclicMorphism(std::move(source), std::move(target), std::move(map), r);
}

PCyclicMorphism PCyclicMorphism::identity(const PObject& k) {
    check_object(k);
    return *make(k, k, CyclicMorphism::identity(point_count(k) - 1));
}

PCyclicMorphism PCyclicMorphism::block_rotation(const PObject& k) {
    check_object(k);
    const int n = point_count(k) - 1;
    return *make(k, rotate_blocks(k), CyclicMorphism::rotation(n, k.back() + 1));
}

bool PCyclicMorphism::is_multisimplicial() const { return r_ == 0; }

std::string PCyclicMorphism::to_string() const {
    return "[" + join(source_) + "]->[" + join(target_) + "] r=" + std::to_string(r_) + " F=(" + join(map_.lift()) + ")";
}

PCyclicMorphism compose(const PCyclicMorphism& g, const PCyclicMorphism& f) {
    if (f.target() != g.source()) throw std::invalid_argument("cyccat: composing non-composable p-cyclic maps");
    auto h = PCyclicMorphism::make(f.source(), g.target(), compose(g.underlying(), f.underlying()));
    if (!h) throw std::logic_error("cyccat: composite left the p-cyclic category");
    return *h;
}

std::vector<PCyclicMorphism> enumerate_phom(const PObject& source, const PObject& target, bool arrow_only) {
    check_object(source);
    check_object(target);
    if (source.size() != target.size()) throw std::invalid_argument("cyccat: objects of different p");
    require_size(std::accumulate(source.begin(), source.end(), 0) <= 6 &&
                     std::accumulate(target.begin(), target.end(), 0) <= 6 && source.size() <= 7,
                 "enumerate_phom");
    return all_phom(source, target, arrow_only);
}

std::vector<std::vector<CyclicMorphism>> enumerate_multisimplicial_hom(const PObject& source, const PObject& target,
                                                                        bool arrow_only) {
    check_object(source);
    check_object(target);
    if (source.size() != target.size()) throw std::invalid_argument("cyccat: objects of different p");
    std::vector<std::vector<CyclicMorphism>> out;
    for_each_block_tuple(source, target, 0, arrow_only, [&](const std::vector<const CyclicMorphism*>& parts) {
        std::vector<CyclicMorphism> tuple;
        for (const auto* c : parts) tuple.push_back(*c);
        out.push_back(std::move(tuple));
    });
    return out;
}

PDecomposition decompose(const PCyclicMorphism& f) {
    const int p = static_cast<int>(f.source().size());
    const int r = f.rotation_index();
    // f' = tau^{p - r} o f, then f = tau^r o f'.
    PCyclicMorphism g = f;
    for (int i = 0; i < (p - r) % p; ++i) g = compose(PCyclicMorphism::block_rotation(g.target()), g);
    if (!g.is_multisimplicial()) throw std::logic_error("cyccat: rotation normal form failed");
    return {r, std::move(g)};
}

CyclicMorphism functor_i(const CyclicMorphism& f) {
    if (!f.preserves_basepoint()) throw std::invalid_argument("cyccat: i is defined on Delta^op maps only");
    return f;
}

CyclicMorphism functor_j(const PCyclicMorphism& f) { return f.underlying(); }

PCyclicMorphism functor_ip(const std::vector<CyclicMorphism>& parts) {
    PObject source, target;
    std::vector<const CyclicMorphism*> ptrs;
    for (const auto& f : parts) {
        if (!f.preserves_basepoint()) throw std::invalid_argument("cyccat: i_p needs Delta^op maps");
        source.push_back(f.source());
        target.push_back(f.target());
        ptrs.push_back(&f);
    }
    check_object(source);
    return *PCyclicMorphism::make(source, target, assemble(source, target, 0, ptrs));
}

CyclicMorphism functor_o(const std::vector<CyclicMorphism>& parts) {
    std::vector<DeltaMorphism> duals;
    for (const auto& f : parts) duals.push_back(joyal_dual(f));
    return joyal_dual(ordinal_sum(duals));
}

int functor_j(const PObject& k) { return point_count(k) - 1; }
int functor_o(const PObject& k) { return point_count(k) - 1; }

std::vector<PObject> pobjects_of_total(int p, int total) {
    std::vector<PObject> out;
    PObject k(p, 0);
    auto rec = [&](auto& self, int s, int left) -> void {
        if (s == p - 1) {
            k[s] = left;
            out.push_back(k);
            return;
        }
        for (int v = left; v >= 0; --v) {
            k[s] = v;
            self(self, s + 1, left - v);
        }
    };
    if (p >= 1 && total >= 0) rec(rec, 0, total);
    return out;
}

int cyclic_set_action(const CyclicMorphism& f, int k) {
    if (k < 0 || k > f.source()) throw std::out_of_range("cyccat: element outside C_n");
    return static_cast<int>(mod(f.at(k), f.target() + 1));
}

std::size_t CellCount::total() const {
    std::size_t t = 0;
    for (const auto& [deg, cells] : nondegenerate) t += cells.size();
    return t;
}

CellCount jstar_cell_count(int p, int max_total) {
    require_size(p >= 2 && p <= 7 && max_total >= 0 && max_total <= 4, "jstar_cell_count");
    CellCount out{p, max_total, {}};
    for (int total = 0; total <= max_total; ++total)
        for (const auto& k : pobjects_of_total(p, total)) {
            const int points = point_count(k);
            std::vector<bool> degenerate(points, false);
            for (int s = 0; s < p; ++s) {
                if (k[s] == 0) continue;
                PObject lower = k;
                --lower[s];
                for (const auto& delta : simplicial_hom(k[s] - 1, k[s], false)) {
                    std::vector<CyclicMorphism> parts;
                    for (int r = 0; r < p; ++r) parts.push_back(r == s ? delta : CyclicMorphism::identity(k[r]));
                    const auto h = functor_j(functor_ip(parts));
                    std::set<int> image;
                    for (int y = 0; y <= h.source(); ++y) image.insert(cyclic_set_action(h, y));
                    if (image.size() != static_cast<std::size_t>(h.source() + 1)) continue;  // not a degeneracy
                    for (int x : image) degenerate[x] = true;
                }
            }
            std::vector<int> cells;
            for (int x = 0; x < points; ++x)
                if (!degenerate[x]) cells.push_back(x);
            if (!cells.empty()) out.nondegenerate[k] = std::move(cells);
        }
    return out;
}

// ---------------------------------------------------------------- bicomplex

namespace {

// Key layout: column, target blocks, underlying lift, one byte each.
std::string element_key(int column, const PCyclicMorphism& g) {
    std::string key(1, static_cast<char>(column));
    for (int v : g.target()) key.push_back(static_cast<char>(v));
    for (int v : g.underlying().lift()) key.push_back(static_cast<char>(v));
    return key;
}

struct Decoded {
    int column;
    PCyclicMorphism map;
};

Decoded decode(const std::string& key, const PObject& source) {
    const std::size_t p = source.size();
    PObject target(p);
    for (std::size_t s = 0; s < p; ++s) target[s] = key[1 + s];
    std::vector<int> lift;
    for (std::size_t i = 1 + p; i < key.size(); ++i) lift.push_back(key[i]);
    const int kt = point_count(target);
    return {key[0], *PCyclicMorphism::make(source, target, CyclicMorphism(std::move(lift), kt - 1))};
}

int sum(const PObject& k) { return std::accumulate(k.begin(), k.end(), 0); }

// The signed cyclic operator: (-1)^{k_p (|k| - k_p)} times block rotation.
int rotation_sign_exponent(const PObject& k) { return k.back() * (sum(k) - k.back()); }

// Multisimplicial face sum on the target: sum over blocks s and faces t of
// (-1)^{t + k_1 + ... + k_{s-1}} d_t^{(s)} o g.
void vertical(const PCyclicMorphism& g, int column, Scalar sign, const PrimeField& F, Terms& out) {
    const auto& k = g.target();
    const int p = static_cast<int>(k.size());
    int offset = 0;
    for (int s = 0; s < p; ++s) {
        for (int t = 0; t <= k[s] && k[s] > 0; ++t) {
            std::vector<int> face_lift(k[s] + 1);
            for (int u = 0; u <= k[s]; ++u) face_lift[u] = u <= t ? u : u - 1;
            std::vector<CyclicMorphism> parts;
            for (int r = 0; r < p; ++r)
                parts.push_back(r == s ? CyclicMorphism(face_lift, k[s] - 1) : CyclicMorphism::identity(k[r]));
            const auto face = functor_ip(parts);
            out.emplace_back(element_key(column, compose(face, g)), F.mul(sign, F.sign(t + offset)));
        }
        offset += k[s];
    }
}

PCyclicMorphism signed_rotate(const PCyclicMorphism& g, int& exponent) {
    exponent += rotation_sign_exponent(g.target());
    return compose(PCyclicMorphism::block_rotation(g.target()), g);
}

void horizontal(const PCyclicMorphism& g, int column, const PrimeField& F, Terms& out) {
    if (column == 0) return;
    const int p = static_cast<int>(g.source().size());
    if (column % 2 == 1) {
        int e = 0;
        auto tg = signed_rotate(g, e);
        out.emplace_back(element_key(column - 1, tg), F.sign(e));
        out.emplace_back(element_key(column - 1, g), F.neg(1));
        return;
    }
    int e = 0;
    PCyclicMorphism cur = g;
    for (int j = 0; j < p; ++j) {
        out.emplace_back(element_key(column - 1, cur), F.sign(e));
        cur = signed_rotate(cur, e);
    }
}

std::string element_name(const std::string& key, const PObject& source) {
    auto [c, g] = decode(key, source);
    return "c" + std::to_string(c) + ":" + g.to_string();
}

void check_request(int p, const PObject& k, int depth) {
    if (static_cast<int>(k.size()) != p) throw std::invalid_argument("cyccat: object has " + std::to_string(k.size()) + " blocks, expected p");
    check_object(k);
    require_size(p <= 7 && depth >= 1 && depth <= 5 && sum(k) <= 4, "plambda_resolution_check");
}

ResolutionReport finish(ChainComplex c, int depth) {
    ResolutionReport rep;
    rep.window = {-(depth - 1), 0};
    c = c.with_window(rep.window);
    rep.total = std::make_shared<const ChainComplex>(std::move(c));
    rep.homology = homology(*rep.total, rep.window);
    rep.ok = true;
    std::ostringstream detail;
    for (int n = rep.window.lo; n <= rep.window.hi; ++n) {
        const std::size_t want = n == 0 ? 1 : 0;
        const std::size_t got = rep.homology.dim(n);
        detail << (n == rep.window.lo ? "" : " ") << "H^" << n << "=" << got;
        if (got != want) rep.ok = false;
    }
    rep.detail = detail.str();
    return rep;
}

}  // namespace

ResolutionReport plambda_resolution_check(int p, const PObject& k, int depth) {
    check_request(p, k, depth);
    const PrimeField F(static_cast<std::uint32_t>(p));
    auto basis = std::make_shared<KeyedBasis>();
    for (int row = 0; row <= depth; ++row)
        for (const auto& target : pobjects_of_total(p, row))
            for (const auto& g : all_phom(k, target, false))
                for (int c = 0; c <= depth; ++c) basis->insert(-(row + c), element_key(c, g));
    auto d = [&](const std::string& key, Terms& out) {
        auto [c, g] = decode(key, k);
        horizontal(g, c, F, out);
        vertical(g, c, F.sign(c), F, out);
    };
    auto namer = [k](const std::string& key) { return element_name(key, k); };
    return finish(build_complex(F, basis, d, {-(2 * depth), 0}, namer), depth);
}

ResolutionReport multisimplicial_vertical_check(int p, const PObject& k, int depth) {
    check_request(p, k, depth);
    const PrimeField F(static_cast<std::uint32_t>(p));
    auto basis = std::make_shared<KeyedBasis>();
    for (int row = 0; row <= depth; ++row)
        for (const auto& target : pobjects_of_total(p, row))
            for (const auto& g : all_phom(k, target, false))
                if (g.is_multisimplicial()) basis->insert(-row, element_key(0, g));
    auto d = [&](const std::string& key, Terms& out) { vertical(decode(key, k).map, 0, 1, F, out); };
    auto namer = [k](const std::string& key) { return element_name(key, k); };
    return finish(build_complex(F, basis, d, {-depth, 0}, namer), depth);
}

CheckReport horizontal_row_check(int p, const PObject& k, int row, int columns) {
    check_request(p, k, std::max(1, std::min(row, 5)));
    require_size(row >= 0 && row <= 5 && columns >= 0 && columns <= 8, "horizontal_row_check");
    const PrimeField F(static_cast<std::uint32_t>(p));
    // Row complex: (c, g) with g in pLambda(k, k'), |k'| = row, differential tau - 1 / N.
    auto row_basis = std::make_shared<KeyedBasis>();
    // Tensor model: (c, j, f') with f' multisimplicial, j in Z/p; key = j byte then a row key.
    auto model_basis = std::make_shared<KeyedBasis>();
    for (const auto& target : pobjects_of_total(p, row))
        for (const auto& g : all_phom(k, target, false))
            for (int c = 0; c <= columns; ++c) {
                row_basis->insert(-c, element_key(c, g));
                if (g.is_multisimplicial())
                    for (int j = 0; j < p; ++j) model_basis->insert(-c, static_cast<char>(j) + element_key(c, g));
            }
    auto row_d = [&](const std::string& key, Terms& out) {
        auto [c, g] = decode(key, k);
        horizontal(g, c, F, out);
    };
    // Periodic resolution of k over k[Z/p] on the basis tau^j.
    auto model_d = [&](const std::string& key, Terms& out) {
        const int j = key[0];
        const std::string rest = key.substr(1);
        const int c = rest[0];
        if (c == 0) return;
        std::string lower = rest;
        lower[0] = static_cast<char>(c - 1);
        if (c % 2 == 1) {
            out.emplace_back(static_cast<char>((j + 1) % p) + lower, 1);
            out.emplace_back(static_cast<char>(j) + lower, F.neg(1));
        } else {
            for (int l = 0; l < p; ++l) out.emplace_back(static_cast<char>(l) + lower, 1);
        }
    };
    auto psi = [&](const std::string& key, Terms& out) {
        const int j = key[0];
        auto [c, g] = decode(key.substr(1), k);
        int e = 0;
        for (int i = 0; i < j; ++i) g = signed_rotate(g, e);
        out.emplace_back(element_key(c, g), F.sign(e));
    };
    auto row_namer = [k](const std::string& key) { return element_name(key, k); };
    auto model_namer = [k](const std::string& key) {
        return "tau^" + std::to_string(static_cast<int>(key[0])) + "*" + element_name(key.substr(1), k);
    };
    auto row_c = std::make_shared<const ChainComplex>(build_complex(F, row_basis, row_d, {}, row_namer));
    auto model_c = std::make_shared<const ChainComplex>(build_complex(F, model_basis, model_d, {}, model_namer));
    ChainMap map(model_c, row_c, 0, build_components(F, *model_basis, *row_basis, 0, psi));
    CheckReport rep = verify_chain_map(map);
    if (!rep) return rep;
    // A signed permutation: every column and every row has exactly one entry, equal to +-1.
    for (const auto& [deg, n] : row_c->basis().dims()) {
        const auto& m = map.component(deg);
        if (m.cols() != model_c->dim(deg) || m.rows() != n || m.cols() != n) {
            return {false, "row model and tensor model differ in size in degree " + std::to_string(deg), std::nullopt};
        }
        std::vector<int> hits(n, 0);
        for (std::size_t col = 0; col < m.cols(); ++col) {
            auto entries = m.column(col);
            if (entries.size() != 1 || (entries[0].value != 1 && entries[0].value != F.neg(1)))
                return {false, "not a signed permutation in degree " + std::to_string(deg), std::nullopt};
            ++hits[entries[0].index];
        }
        if (std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; }))
            return {false, "not a bijection in degree " + std::to_string(deg), std::nullopt};
    }
    rep.detail = "row " + std::to_string(row) + " is free on " + std::to_string(model_basis->size() / p / (columns + 1)) +
                 " multisimplicial maps tensored with the periodic complex";
    return rep;
}

}  // namespace cychom
