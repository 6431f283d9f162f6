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

#include "cychom/cycmod.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

#include "cychom/hochschild.hpp"

namespace cychom {

namespace {

void for_each_key(const KeyedBasis& b, const std::function<void(int, const std::string&)>& fn) {
    for (int deg : b.degrees())
        for (std::uint32_t i = 0; i < b.dim(deg); ++i) fn(deg, b.key(deg, i));
}

int key_degree(const KeyedBasis& b, const std::string& key) {
    auto loc = b.find(key);
    if (!loc) throw std::logic_error("cycmod: key outside its object");
    return loc->degree;
}

// Degree-zero cells are exactly those the augmentation sends to 1.
bool augmented(const std::vector<PlanarTree>& cells) {
    return std::all_of(cells.begin(), cells.end(), [](const PlanarTree& t) { return t.degree() == 0; });
}

int cells_degree(const std::vector<PlanarTree>& cells) {
    int d = 0;
    for (const auto& t : cells) d += t.degree();
    return d;
}

std::string header(int n) { return std::string(1, static_cast<char>(n)); }
std::string header(const PObject& k) {
    std::string h;
    for (int x : k) h.push_back(static_cast<char>(x));
    return h;
}

// [n] -> [n - s + 1] merging the arc start..start+s-1.
CyclicMorphism arc_face(int n, int start, int s) {
    std::vector<int> lift(n + 1);
    for (int u = 0; u <= n; ++u) lift[u] = u < start ? u : (u < start + s ? start : u - s + 1);
    return CyclicMorphism(std::move(lift), n - s + 1);
}

// [n] -> [n - r - t] merging n-r+1..n, 0..t into the zeroth point.
CyclicMorphism wrap_face(int n, int r, int t) {
    const int m = n - r - t;
    std::vector<int> lift(n + 1);
    for (int u = 0; u <= n; ++u) lift[u] = u <= t ? 0 : (u <= n - r ? u - t : m + 1);
    return CyclicMorphism(std::move(lift), m);
}

// Identity cells on singleton fibres, the unit on empty ones and a corolla on
// the one larger fibre.
Decorated corolla_decoration(const CyclicMorphism& f) {
    Decorated d{f, {}};
    for (const auto& fibre : ordered_fibres(f)) {
        if (fibre.empty()) d.cells.push_back(PlanarTree::unit());
        else if (fibre.size() == 1) d.cells.push_back(PlanarTree::identity());
        else d.cells.push_back(PlanarTree::corolla(static_cast<int>(fibre.size())));
    }
    return d;
}

struct Face {
    Decorated g;
    int exponent = 0;  // sign (-1)^exponent
    bool wrap = false;
    std::vector<int> points;  // the merged arc in [n]
};

// Single-corolla faces out of [n]: non-wrapping arcs carry (-1)^{r + s t},
// wrapped arcs (-1)^{n + t n}.
std::vector<Face> faces(int n, int top, bool wrap) {
    std::vector<Face> out;
    const int smax = std::min(n + 1, top);
    for (int s = 2; s <= smax; ++s) {
        for (int i = 0; i + s <= n + 1; ++i) {
            const int r = i, t = n - s + 1 - i;
            Face f{corolla_decoration(arc_face(n, i, s)), r + s * t, false, {}};
            for (int u = i; u < i + s; ++u) f.points.push_back(u);
            out.push_back(std::move(f));
        }
        if (!wrap) continue;
        for (int r = 1; r <= s - 1; ++r) {
            const int t = s - 1 - r;
            Face f{corolla_decoration(wrap_face(n, r, t)), n + t * n, true, {}};
            for (int u = n - r + 1; u <= n; ++u) f.points.push_back(u);
            for (int u = 0; u <= t; ++u) f.points.push_back(u);
            out.push_back(std::move(f));
        }
    }
    return out;
}

DegreeWindow low_cut_window(std::optional<int> q, const ChainComplex& c, int extra) {
    if (!q || c.grading() != Grading::Z) return DegreeWindow::none();
    auto top = c.basis().max_degree();
    if (!top) return DegreeWindow::none();
    return {*q + 2 + extra, *top};
}

// Mirror image for cobar complexes, whose truncation cuts high degrees. The
// lowest degree is dropped too since the series truncation cuts there.
DegreeWindow high_cut_window(std::optional<int> q, const ChainComplex& c, int extra, bool series) {
    if (!q || c.grading() != Grading::Z) return DegreeWindow::none();
    auto bottom = c.basis().min_degree();
    if (!bottom) return DegreeWindow::none();
    return {*bottom + (series ? 1 : 0), *q - 2 - extra};
}

std::optional<int> shifted(std::optional<int> q, int by) {
    if (!q) return std::nullopt;
    return *q + by;
}

void scale_into(Terms& tmp, Scalar c, const std::string& prefix, Terms& out, const PrimeField& F) {
    for (auto& [k, v] : tmp) out.emplace_back(prefix + k, F.mul(c, v));
    tmp.clear();
}

// ---------------------------------------------------------------------------
// Modules

class HochschildModule final : public CyclicModule {
public:
    HochschildModule(const AInfAlgebra& a, int bound) : a_(a), bound_(bound) {
        if (bound < 0) throw std::invalid_argument("hochschild_functor: negative object bound");
        if (a.dim() > 127) throw std::invalid_argument("hochschild_functor: at most 127 basis elements");
        double size = 1;
        for (int n = 0; n <= bound; ++n) size *= static_cast<double>(a.dim());
        if (size > 2e6) throw std::invalid_argument("hochschild_functor: object bound too large for this algebra");
        for (int n = 0; n <= bound; ++n) {
            auto b = std::make_unique<KeyedBasis>(a.grading());
            std::string w(n + 1, '\0');
            std::function<void(int, int)> rec = [&](int pos, int deg) {
                if (pos == n + 1) {
                    b->insert(deg, w);
                    return;
                }
                for (std::size_t e = 0; e < a.dim(); ++e) {
                    w[pos] = static_cast<char>(e);
                    rec(pos + 1, deg + a.degree(static_cast<Elem>(e)));
                }
            };
            rec(0, 0);
            objects_.push_back(std::move(b));
        }
    }

    const PrimeField& field() const override { return a_.field(); }
    int bound() const override { return bound_; }
    bool plain() const override { return false; }
    bool unital() const override { return a_.unit().has_value(); }
    int top_arity() const override { return a_.top_arity(); }
    const KeyedBasis& object(int n) const override { return *objects_.at(n); }
    std::string name(int, const std::string& key) const override { return word_name(a_, key); }
    std::string marked_name(int, const std::string& key, const std::vector<int>& marks) const override {
        std::string slots = key;
        for (int i : marks) slots[i] = static_cast<char>(slots[i] | 0x80);
        return word_name(a_, slots);
    }

    void differential(int, const std::string& key, Terms& out) const override {
        const auto& F = a_.field();
        int before = 0;
        for (std::size_t i = 0; i < key.size(); ++i) {
            const Elem e = static_cast<Elem>(key[i]);
            std::vector<Elem> in{e};
            for (const auto& t : a_.mu(in)) {
                std::string w = key;
                w[i] = static_cast<char>(t.out);
                out.emplace_back(std::move(w), F.mul(F.sign(before), t.coeff));
            }
            before += a_.degree(e);
        }
    }

    void act(const Decorated& g, const std::string& key, Terms& out) const override {
        const auto& F = a_.field();
        const auto fib = ordered_fibres(g.map);
        if (static_cast<int>(key.size()) != g.map.source() + 1 || g.cells.size() != fib.size())
            throw std::invalid_argument("hochschild_functor: decoration does not match the morphism");
        std::vector<int> deg(key.size());
        for (std::size_t i = 0; i < key.size(); ++i) deg[i] = a_.degree(static_cast<Elem>(key[i]));
        // Regroup a_0..a_n into fibre order.
        std::vector<int> order;
        for (const auto& fibre : fib) order.insert(order.end(), fibre.begin(), fibre.end());
        long long e = 0;
        for (std::size_t x = 0; x < order.size(); ++x)
            for (std::size_t y = x + 1; y < order.size(); ++y)
                if (order[x] > order[y]) e += static_cast<long long>(deg[order[x]]) * deg[order[y]];
        std::vector<std::pair<std::string, Scalar>> acc{{std::string(), 1}};
        int before = 0;
        for (std::size_t j = 0; j < fib.size(); ++j) {
            const Multilinear& phi = cell_map(g.cells[j]);
            if (phi.arity != static_cast<int>(fib[j].size()))
                throw std::invalid_argument("hochschild_functor: cell arity differs from its fibre");
            e += static_cast<long long>(phi.degree) * before;
            std::size_t idx = 0;
            for (int i : fib[j]) {
                idx = idx * a_.dim() + static_cast<unsigned char>(key[i]);
                before += deg[i];
            }
            const auto& row = phi.table[idx];
            std::vector<std::pair<std::string, Scalar>> next;
            for (const auto& [w, c] : acc)
                for (std::size_t o = 0; o < row.size(); ++o)
                    if (row[o]) next.emplace_back(w + static_cast<char>(o), F.mul(c, row[o]));
            acc = std::move(next);
            if (acc.empty()) return;
        }
        const Scalar s = F.sign(e);
        for (auto& [w, c] : acc) out.emplace_back(std::move(w), F.mul(s, c));
    }

    std::optional<int> excluded_top(int L) const override { return excluded_top_cc(a_, L); }

private:
    const Multilinear& cell_map(const PlanarTree& t) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(t.to_string());
        if (it == cache_.end()) it = cache_.emplace(t.to_string(), evaluate_on_algebra(a_, t)).first;
        return it->second;
    }

    AInfAlgebra a_;
    int bound_;
    std::vector<std::unique_ptr<KeyedBasis>> objects_;
    mutable std::mutex mu_;
    mutable std::map<std::string, Multilinear> cache_;
};

// Plain modules: the map acts, cells only through the augmentation.
class PlainModule : public CyclicModule {
public:
    bool plain() const override { return true; }
    int top_arity() const override { return 2; }
    void act(const Decorated& g, const std::string& key, Terms& out) const override {
        if (augmented(g.cells)) act_map(g.map, key, out);
    }
    virtual void act_map(const CyclicMorphism& f, const std::string& key, Terms& out) const = 0;
};

class ConstantModule final : public PlainModule {
public:
    ConstantModule(const PrimeField& F, int bound) : F_(F), bound_(bound) {
        if (bound < 0) throw std::invalid_argument("constant_module: negative object bound");
        for (int n = 0; n <= bound; ++n) {
            objects_.push_back(std::make_unique<KeyedBasis>());
            objects_.back()->insert(0, "");
        }
    }
    const PrimeField& field() const override { return F_; }
    int bound() const override { return bound_; }
    bool unital() const override { return true; }
    const KeyedBasis& object(int n) const override { return *objects_.at(n); }
    std::string name(int n, const std::string&) const override { return "1_" + std::to_string(n); }
    void differential(int, const std::string&, Terms&) const override {}
    void act_map(const CyclicMorphism&, const std::string& key, Terms& out) const override { out.emplace_back(key, 1); }
    std::optional<int> excluded_top(int L) const override { return -(L + 1); }

private:
    PrimeField F_;
    int bound_;
    std::vector<std::unique_ptr<KeyedBasis>> objects_;
};

std::string lift_key(const CyclicMorphism& f) {
    std::string k;
    for (int v : f.lift()) k.push_back(static_cast<char>(v));
    return k;
}

CyclicMorphism lift_from_key(const std::string& key, int target) {
    std::vector<int> lift;
    for (char c : key) lift.push_back(static_cast<signed char>(c));
    return CyclicMorphism(std::move(lift), target);
}

class RepresentableModule final : public PlainModule {
public:
    RepresentableModule(int m, int bound, const PrimeField& F, bool arrow)
        : m_(m), F_(F), bound_(bound), arrow_(arrow) {
        if (m < 0 || bound < 0) throw std::invalid_argument("representable_module: negative object");
        if (m > 6 || bound > 6) throw std::invalid_argument("representable_module: objects beyond [6] are not enumerated");
        for (int n = 0; n <= bound; ++n) {
            objects_.push_back(std::make_unique<KeyedBasis>());
            for (const auto& f : enumerate_hom(m, n, arrow)) objects_.back()->insert(0, lift_key(f));
        }
    }
    const PrimeField& field() const override { return F_; }
    int bound() const override { return bound_; }
    bool unital() const override { return !arrow_; }
    const KeyedBasis& object(int n) const override { return *objects_.at(n); }
    std::string name(int n, const std::string& key) const override { return lift_from_key(key, n).to_string(); }
    void differential(int, const std::string&, Terms&) const override {}
    void act_map(const CyclicMorphism& g, const std::string& key, Terms& out) const override {
        if (arrow_ && !g.surjective()) throw std::invalid_argument("representable_module: non-surjective map on the arrow part");
        out.emplace_back(lift_key(compose(g, lift_from_key(key, g.source()))), 1);
    }
    std::optional<int> excluded_top(int L) const override { return -(L + 1); }

private:
    int m_;
    PrimeField F_;
    int bound_;
    bool arrow_;
    std::vector<std::unique_ptr<KeyedBasis>> objects_;
};

class DualModule final : public CocyclicModule {
public:
    explicit DualModule(std::shared_ptr<const CyclicModule> q) : q_(std::move(q)) {
        for (int n = 0; n <= q_->bound(); ++n) {
            const auto& src = q_->object(n);
            auto b = std::make_unique<KeyedBasis>(src.grading());
            for_each_key(src, [&](int deg, const std::string& k) { b->insert(-deg, k); });
            objects_.push_back(std::move(b));
        }
    }
    const PrimeField& field() const override { return q_->field(); }
    int bound() const override { return q_->bound(); }
    int top_arity() const override { return q_->top_arity(); }
    const KeyedBasis& object(int n) const override { return *objects_.at(n); }
    std::string name(int n, const std::string& key) const override { return q_->name(n, key) + "*"; }
    std::string marked_name(int n, const std::string& key, const std::vector<int>& marks) const override {
        return q_->marked_name(n, key, marks) + "*";
    }
    void differential(int n, const std::string& key, Terms& out) const override {
        transpose(n, n, -key_degree(*objects_[n], key) - 1, key, out,
                  [&](const std::string& k, Terms& t) { q_->differential(n, k, t); });
    }
    void coact(const Decorated& g, const std::string& key, Terms& out) const override {
        const int m = g.map.target(), n = g.map.source();
        // Q(g) raises degree by -cells_degree, so the preimages sit below.
        const int deg = -key_degree(*objects_[m], key) + cells_degree(g.cells);
        transpose(n, m, deg, key, out, [&](const std::string& k, Terms& t) { q_->act(g, k, t); });
    }
    std::optional<int> excluded_bottom(int L) const override {
        auto q = q_->excluded_top(L);
        if (!q) return std::nullopt;
        return -*q;
    }

private:
    // Coefficient of `key` in op(e) for every basis element e of Q_source in degree deg.
    void transpose(int source, int, int deg, const std::string& key, Terms& out,
                   const std::function<void(const std::string&, Terms&)>& op) const {
        const auto& b = q_->object(source);
        Terms tmp;
        for (std::uint32_t i = 0; i < b.dim(deg); ++i) {
            const auto& e = b.key(deg, i);
            tmp.clear();
            op(e, tmp);
            Scalar c = 0;
            for (const auto& [k, v] : tmp)
                if (k == key) c = q_->field().add(c, v);
            if (c) out.emplace_back(e, c);
        }
    }

    std::shared_ptr<const CyclicModule> q_;
    std::vector<std::unique_ptr<KeyedBasis>> objects_;
};

class ConstantComodule final : public CocyclicModule {
public:
    ConstantComodule(const PrimeField& F, int bound) : F_(F), bound_(bound) {
        if (bound < 0) throw std::invalid_argument("constant_comodule: negative object bound");
        for (int n = 0; n <= bound; ++n) {
            objects_.push_back(std::make_unique<KeyedBasis>());
            objects_.back()->insert(0, "");
        }
    }
    const PrimeField& field() const override { return F_; }
    int bound() const override { return bound_; }
    int top_arity() const override { return 2; }
    const KeyedBasis& object(int n) const override { return *objects_.at(n); }
    std::string name(int n, const std::string&) const override { return "1^" + std::to_string(n); }
    void differential(int, const std::string&, Terms&) const override {}
    void coact(const Decorated& g, const std::string& key, Terms& out) const override {
        if (augmented(g.cells)) out.emplace_back(key, 1);
    }
    std::optional<int> excluded_bottom(int L) const override { return L + 1; }

private:
    PrimeField F_;
    int bound_;
    std::vector<std::unique_ptr<KeyedBasis>> objects_;
};

}  // namespace

std::string CyclicModule::marked_name(int n, const std::string& key, const std::vector<int>& marks) const {
    std::string s = name(n, key) + " @";
    for (int m : marks) s += " " + std::to_string(m);
    return s;
}

std::string CocyclicModule::marked_name(int n, const std::string& key, const std::vector<int>& marks) const {
    std::string s = name(n, key) + " @";
    for (int m : marks) s += " " + std::to_string(m);
    return s;
}

std::shared_ptr<const CyclicModule> hochschild_functor(const AInfAlgebra& a, int bound) {
    return std::make_shared<HochschildModule>(a, bound);
}

std::shared_ptr<const CyclicModule> constant_module(const PrimeField& field, int bound) {
    return std::make_shared<ConstantModule>(field, bound);
}

std::shared_ptr<const CyclicModule> representable_module(int m, int bound, const PrimeField& field, bool arrow_only) {
    return std::make_shared<RepresentableModule>(m, bound, field, arrow_only);
}

void PCyclicModule::act(const PCyclicMorphism& f, const std::vector<PlanarTree>& cells, const std::string& key,
                        Terms& out) const {
    base->act(Decorated{functor_j(f), cells}, key, out);
}

PCyclicModule restrict_along_j(std::shared_ptr<const CyclicModule> q, int p) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("restrict_along_j: p must be odd and at least 3");
    return {std::move(q), p};
}

std::shared_ptr<const CocyclicModule> dual_module(std::shared_ptr<const CyclicModule> q) {
    return std::make_shared<DualModule>(std::move(q));
}

std::shared_ptr<const CocyclicModule> constant_comodule(const PrimeField& field, int bound) {
    return std::make_shared<ConstantComodule>(field, bound);
}

PCocyclicModule restrict_along_j(std::shared_ptr<const CocyclicModule> q, int p) {
    if (p < 3 || p % 2 == 0) throw std::invalid_argument("restrict_along_j: p must be odd and at least 3");
    return {std::move(q), p};
}

// ---------------------------------------------------------------------------
// Totalizations

namespace {

using PFaces = std::vector<std::pair<Face, PObject>>;  // admissible face and its target

PObject blocks_from_marks(const std::vector<int>& marks, int m) {
    PObject k;
    for (std::size_t i = 0; i < marks.size(); ++i) {
        int next = i + 1 < marks.size() ? marks[i + 1] : m + 1;
        k.push_back(next - marks[i] - 1);
    }
    return k;
}

// Faces of [k] that merge at most one distinguished point.
PFaces pfold_faces(const PObject& k, int top) {
    const int n = functor_j(k);
    const auto marks = distinguished_points(k);
    PFaces out;
    for (auto& f : faces(n, top, true)) {
        int hit = 0;
        for (int u : f.points) hit += std::count(marks.begin(), marks.end(), u) > 0;
        if (hit > 1) continue;
        const auto& map = f.g.map;
        std::vector<int> image;
        for (int d : marks) image.push_back(static_cast<int>(map.at(d) % (map.target() + 1)));
        std::sort(image.begin(), image.end());
        PObject target = blocks_from_marks(image, map.target());
        out.emplace_back(std::move(f), std::move(target));
    }
    return out;
}

std::vector<PObject> pobjects_up_to(int p, int L) {
    std::vector<PObject> out;
    for (int total = 0; total <= L; ++total)
        for (auto& k : pobjects_of_total(p, total)) out.push_back(std::move(k));
    return out;
}

PObject unrotate_blocks(const PObject& k) {
    PObject r(k.begin() + 1, k.end());
    r.push_back(k.front());
    return r;
}

int block_rotation_exponent(const PObject& k) {
    int K = 0;
    for (int x : k) K += x;
    const int kp = k.back(), p = static_cast<int>(k.size());
    return (kp + 1) * (K - kp + p - 1);
}

// Everything a bar-type complex needs: basis, differential and namer.
struct Built {
    std::shared_ptr<KeyedBasis> basis;
    KeyOperator d;
    KeyNamer namer;
};

ChainMap::Ptr finish(const PrimeField& F, const Built& b, DegreeWindow w = DegreeWindow::none()) {
    return std::make_shared<const ChainComplex>(build_complex(F, b.basis, b.d, w, b.namer));
}

Operator endo(const PrimeField& F, const ChainMap::Ptr& c, const KeyedBasis& basis, int shift, const KeyOperator& op) {
    return Operator(c, c, shift, build_components(F, basis, basis, shift, op, true));
}

void check_bound(int needed, int bound, const char* what) {
    if (needed > bound)
        throw std::invalid_argument(std::string(what) + ": the module is only given on objects up to [" +
                                    std::to_string(bound) + "], need [" + std::to_string(needed) + "]");
}

// The cyclic bar complex pieces on Q_0[0] + ... + Q_L[L].
struct CyclicPieces {
    std::shared_ptr<KeyedBasis> basis;
    std::vector<std::vector<Face>> faces;  // by n
    KeyOperator b, bprime, tau;
    KeyNamer namer;
};

CyclicPieces cyclic_pieces(const CyclicModule& q, int L) {
    if (L < 0) throw std::invalid_argument("bar_totalization: L must be nonnegative");
    check_bound(L, q.bound(), "bar_totalization");
    const auto& F = q.field();
    CyclicPieces c;
    c.basis = std::make_shared<KeyedBasis>(q.object(0).grading());
    for (int n = 0; n <= L; ++n) {
        for_each_key(q.object(n), [&](int deg, const std::string& k) { c.basis->insert(deg - n, header(n) + k); });
        c.faces.push_back(faces(n, q.top_arity(), true));
    }
    auto diff = [&q, &F, fs = c.faces](bool wrap) {
        return KeyOperator([&q, &F, fs, wrap](const std::string& key, Terms& out) {
            const int n = key[0];
            const std::string x = key.substr(1);
            Terms tmp;
            q.differential(n, x, tmp);
            scale_into(tmp, F.sign(n), header(n), out, F);
            for (const auto& f : fs[n]) {
                if (f.wrap && !wrap) continue;
                q.act(f.g, x, tmp);
                scale_into(tmp, F.sign(f.exponent), header(f.g.map.target()), out, F);
            }
        });
    };
    c.b = diff(true);
    c.bprime = diff(false);
    c.tau = [&q, &F](const std::string& key, Terms& out) {
        const int n = key[0];
        Terms tmp;
        q.act(Decorated{CyclicMorphism::rotation(n, 1), std::vector<PlanarTree>(n + 1, PlanarTree::identity())},
              key.substr(1), tmp);
        scale_into(tmp, F.sign(n), header(n), out, F);
    };
    c.namer = [self = q.shared_from_this()](const std::string& key) { return self->name(key[0], key.substr(1)); };
    return c;
}

KeyOperator norm_of(KeyOperator tau, const PrimeField& F) {
    return [tau = std::move(tau), &F](const std::string& key, Terms& out) {
        const int n = key[0];
        Terms cur{{key, 1}};
        for (int i = 0; i <= n; ++i) {
            out.insert(out.end(), cur.begin(), cur.end());
            if (i < n) cur = apply(tau, cur, F);
        }
    };
}

}  // namespace

ModuleTotalization bar_totalization(const CyclicModule& q, BarVariant v, int L, int N) {
    if (v == BarVariant::pfold || v == BarVariant::zp_equivariant)
        throw std::invalid_argument("bar_totalization: the p-fold variants need a finite p-cyclic module");
    if (N < 0) throw std::invalid_argument("bar_totalization: N must be nonnegative");
    const auto& F = q.field();
    auto c = cyclic_pieces(q, L);
    const auto top = q.excluded_top(L);
    if (v == BarVariant::bar || v == BarVariant::cyclic_bar) {
        Built b{c.basis, v == BarVariant::bar ? c.bprime : c.b, c.namer};
        auto raw = finish(F, b);
        auto cc = std::make_shared<const ChainComplex>(raw->with_window(low_cut_window(top, *raw, 0)));
        return {cc, endo(F, cc, *c.basis, 0, c.tau), std::nullopt};
    }
    // (u, e+) model: x -> b x + (-1)^{|x|} N x u e+, x e+ -> b' x e+ + (-1)^{|x|} (tau - 1) x.
    auto nu = std::make_shared<KeyedBasis>(c.basis->grading());
    for_each_key(*c.basis, [&](int deg, const std::string& k) {
        nu->insert(deg, std::string(1, '\0') + k);
        nu->insert(deg - 1, std::string(1, '\1') + k);
    });
    auto N_op = norm_of(c.tau, F);
    auto degree = [basis = c.basis](const std::string& k) { return key_degree(*basis, k); };
    KeyOperator d = [&F, c, degree](const std::string& key, Terms& out) {
        const std::string x = key.substr(1);
        Terms tmp;
        if (key[0] == 0) {
            c.b(x, tmp);
            scale_into(tmp, 1, std::string(1, '\0'), out, F);
            return;
        }
        c.bprime(x, tmp);
        scale_into(tmp, 1, std::string(1, '\1'), out, F);
        const Scalar s = F.sign(degree(x));
        c.tau(x, tmp);
        scale_into(tmp, s, std::string(1, '\0'), out, F);
        out.emplace_back(std::string(1, '\0') + x, F.neg(s));
    };
    KeyOperator B = [&F, N_op, degree](const std::string& key, Terms& out) {
        if (key[0] != 0) return;
        const std::string x = key.substr(1);
        Terms tmp;
        N_op(x, tmp);
        scale_into(tmp, F.sign(degree(x)), std::string(1, '\1'), out, F);
    };
    KeyNamer namer = [n = c.namer](const std::string& key) { return n(key.substr(1)) + (key[0] ? "·e⁺" : ""); };
    auto raw = finish(F, Built{nu, d, namer});
    auto base = std::make_shared<const ChainComplex>(raw->with_window(low_cut_window(top, *raw, 0)));
    auto connes = endo(F, base, *nu, -1, B);
    SeriesShape shape{SeriesVariable::t, false, N, "u", "e⁺"};
    auto s = SeriesComplex::build(base, shape, {{0, 0, 1, connes, false, 1}}, DegreeWindow::none());
    s = s.with_window(series_window(top, shape, *s.complex(), std::nullopt));
    return {s.complex(), std::nullopt, s};
}

namespace {

struct PFoldPieces {
    std::shared_ptr<KeyedBasis> basis;
    KeyOperator b, tau;
    KeyNamer namer;
    std::optional<int> top;
};

PFoldPieces pfold_pieces(const PCyclicModule& q, int L) {
    if (L < 0) throw std::invalid_argument("bar_totalization: L must be nonnegative");
    const int p = q.p;
    const auto& Q = *q.base;
    check_bound(L + p - 1, Q.bound(), "bar_totalization");
    const auto& F = Q.field();
    PFoldPieces c;
    c.basis = std::make_shared<KeyedBasis>(Q.object(0).grading());
    auto objects = pobjects_up_to(p, L);
    std::map<PObject, PFaces> fs;
    for (const auto& k : objects) {
        int K = functor_j(k) - p + 1;
        for_each_key(q.object(k), [&](int deg, const std::string& x) { c.basis->insert(deg - K, header(k) + x); });
        fs.emplace(k, pfold_faces(k, Q.top_arity()));
    }
    c.b = [&Q, &F, p, fs](const std::string& key, Terms& out) {
        const PObject k(key.begin(), key.begin() + p);
        const std::string x = key.substr(p);
        const int n = functor_j(k);
        Terms tmp;
        Q.differential(n, x, tmp);
        scale_into(tmp, F.sign(n), header(k), out, F);
        for (const auto& [f, target] : fs.at(k)) {
            Q.act(f.g, x, tmp);
            scale_into(tmp, F.sign(f.exponent), header(target), out, F);
        }
    };
    c.tau = [&Q, &F, p](const std::string& key, Terms& out) {
        const PObject k(key.begin(), key.begin() + p);
        const int n = functor_j(k);
        Terms tmp;
        Q.act(Decorated{CyclicMorphism::rotation(n, k.back() + 1), std::vector<PlanarTree>(n + 1, PlanarTree::identity())},
              key.substr(p), tmp);
        scale_into(tmp, F.sign(block_rotation_exponent(k)), header(rotate_blocks(k)), out, F);
    };
    c.namer = [self = Q.shared_from_this(), p](const std::string& key) {
        const PObject k(key.begin(), key.begin() + p);
        return self->marked_name(functor_j(k), key.substr(p), distinguished_points(k));
    };
    c.top = shifted(Q.excluded_top(L + p - 1), p - 1);
    return c;
}

}  // namespace

ModuleTotalization bar_totalization(const PCyclicModule& q, BarVariant v, int L, int N) {
    if (v != BarVariant::pfold && v != BarVariant::zp_equivariant)
        throw std::invalid_argument("bar_totalization: a finite p-cyclic module only has the p-fold variants");
    if (N < 0) throw std::invalid_argument("bar_totalization: N must be nonnegative");
    const auto& F = q.base->field();
    auto c = pfold_pieces(q, L);
    auto raw = finish(F, Built{c.basis, c.b, c.namer});
    auto cc = std::make_shared<const ChainComplex>(raw->with_window(low_cut_window(c.top, *raw, 0)));
    auto tau = endo(F, cc, *c.basis, 0, c.tau);
    if (v == BarVariant::pfold) return {cc, tau, std::nullopt};
    PFoldComplex pf{q.p, cc, tau};
    SeriesShape shape{SeriesVariable::t, true, N, "t", "θ"};
    auto s = zp_equivariant_complex(pf, N, DegreeWindow::none(), std::nullopt);
    s = s.with_window(series_window(c.top, shape, *s.complex(), std::nullopt));
    return {s.complex(), tau, s};
}

namespace {

struct CobarPieces {
    std::shared_ptr<KeyedBasis> basis;
    KeyOperator b, w, tau;
    KeyNamer namer;
};

CobarPieces cobar_pieces(const CocyclicModule& q, int L) {
    if (L < 0) throw std::invalid_argument("cobar_totalization: L must be nonnegative");
    check_bound(L, q.bound(), "cobar_totalization");
    const auto& F = q.field();
    CobarPieces c;
    c.basis = std::make_shared<KeyedBasis>(q.object(0).grading());
    std::vector<std::vector<Face>> cofaces(L + 1);
    for (int m = 0; m <= L; ++m) {
        for_each_key(q.object(m), [&](int deg, const std::string& k) { c.basis->insert(deg + m, header(m) + k); });
        for (auto& f : faces(m, q.top_arity(), true)) cofaces[f.g.map.target()].push_back(std::move(f));
    }
    auto diff = [&q, &F, cofaces](bool internal, bool plain, bool wrap) {
        return KeyOperator([&q, &F, cofaces, internal, plain, wrap](const std::string& key, Terms& out) {
            const int n = key[0];
            const std::string x = key.substr(1);
            Terms tmp;
            if (internal) {
                q.differential(n, x, tmp);
                scale_into(tmp, F.sign(n), header(n), out, F);
            }
            for (const auto& f : cofaces[n]) {
                if (f.wrap ? !wrap : !plain) continue;
                q.coact(f.g, x, tmp);
                scale_into(tmp, F.sign(f.exponent), header(f.g.map.source()), out, F);
            }
        });
    };
    c.b = diff(true, true, true);
    c.w = diff(false, false, true);
    c.tau = [&q, &F](const std::string& key, Terms& out) {
        const int n = key[0];
        Terms tmp;
        q.coact(Decorated{CyclicMorphism::rotation(n, 1), std::vector<PlanarTree>(n + 1, PlanarTree::identity())},
                key.substr(1), tmp);
        scale_into(tmp, F.sign(n), header(n), out, F);
    };
    c.namer = [self = q.shared_from_this()](const std::string& key) { return self->name(key[0], key.substr(1)); };
    return c;
}

}  // namespace

ModuleTotalization cobar_totalization(const CocyclicModule& q, CobarVariant v, int L, int N) {
    if (v == CobarVariant::pfold_cocyclic || v == CobarVariant::zp_positive)
        throw std::invalid_argument("cobar_totalization: the p-fold variants need a finite p-cocyclic module");
    if (N < 0) throw std::invalid_argument("cobar_totalization: N must be nonnegative");
    const auto& F = q.field();
    auto c = cobar_pieces(q, L);
    const auto bottom = q.excluded_bottom(L);
    KeyOperator bprime = [&F, c](const std::string& key, Terms& out) {
        c.b(key, out);
        Terms tmp;
        c.w(key, tmp);
        for (auto& [k, v] : tmp) out.emplace_back(std::move(k), F.neg(v));
    };
    auto raw = finish(F, Built{c.basis, v == CobarVariant::cobar ? bprime : c.b, c.namer});
    auto cc = std::make_shared<const ChainComplex>(raw->with_window(high_cut_window(bottom, *raw, 0, false)));
    if (v == CobarVariant::cobar || v == CobarVariant::cocyclic_cobar)
        return {cc, endo(F, cc, *c.basis, 0, c.tau), std::nullopt};
    // CC(Q)[u, e+] with |u| = -2, |e+| = -1:
    // x u^k -> b x u^k + (-1)^{|x|} (tau - 1) x u^{k-1} e+, x u^k e+ -> b' x u^k e+ + (-1)^{|x|} N x u^k.
    auto tau = endo(F, cc, *c.basis, 0, c.tau);
    auto norm = endo(F, cc, *c.basis, 0, norm_of(c.tau, F));
    auto w = endo(F, cc, *c.basis, 1, c.w);
    SeriesShape shape{SeriesVariable::t_dual, true, N, "u", "e⁺"};
    std::vector<SeriesTerm> terms{{0, 1, -1, tau_minus_one_power(tau, 1), true, 1},
                                  {1, 0, 0, norm, true, 1},
                                  {1, 1, 0, w, false, F.neg(1)}};
    auto s = SeriesComplex::build(cc, shape, terms, DegreeWindow::none());
    s = s.with_window(high_cut_window(bottom, *s.complex(), 2 * N + 1, true));
    return {s.complex(), tau, s};
}

ModuleTotalization cobar_totalization(const PCocyclicModule& q, CobarVariant v, int L, int N) {
    if (v != CobarVariant::pfold_cocyclic && v != CobarVariant::zp_positive)
        throw std::invalid_argument("cobar_totalization: a finite p-cocyclic module only has the p-fold variants");
    if (L < 0 || N < 0) throw std::invalid_argument("cobar_totalization: L and N must be nonnegative");
    const int p = q.p;
    const auto& Q = *q.base;
    check_bound(L + p - 1, Q.bound(), "cobar_totalization");
    const auto& F = Q.field();
    auto basis = std::make_shared<KeyedBasis>(Q.object(0).grading());
    std::map<PObject, std::vector<std::pair<Face, PObject>>> cofaces;  // by target: (face, source)
    for (const auto& k : pobjects_up_to(p, L)) {
        const int n = functor_j(k);
        for_each_key(Q.object(n), [&](int deg, const std::string& x) { basis->insert(deg + n - p + 1, header(k) + x); });
        for (auto& [f, target] : pfold_faces(k, Q.top_arity())) cofaces[target].emplace_back(std::move(f), k);
    }
    KeyOperator b = [&Q, &F, p, cofaces](const std::string& key, Terms& out) {
        const PObject k(key.begin(), key.begin() + p);
        const std::string x = key.substr(p);
        const int n = functor_j(k);
        Terms tmp;
        Q.differential(n, x, tmp);
        scale_into(tmp, F.sign(n), header(k), out, F);
        auto it = cofaces.find(k);
        if (it == cofaces.end()) return;
        for (const auto& [f, source] : it->second) {
            Q.coact(f.g, x, tmp);
            scale_into(tmp, F.sign(f.exponent), header(source), out, F);
        }
    };
    // Transpose of the block rotation: Q^{rot k} -> Q^k.
    KeyOperator rot = [&Q, &F, p](const std::string& key, Terms& out) {
        const PObject kr(key.begin(), key.begin() + p);
        const PObject k = unrotate_blocks(kr);
        const int n = functor_j(k);
        Terms tmp;
        Q.coact(Decorated{CyclicMorphism::rotation(n, k.back() + 1), std::vector<PlanarTree>(n + 1, PlanarTree::identity())},
                key.substr(p), tmp);
        scale_into(tmp, F.sign(block_rotation_exponent(k)), header(k), out, F);
    };
    KeyNamer namer = [self = Q.shared_from_this(), p](const std::string& key) {
        const PObject k(key.begin(), key.begin() + p);
        return self->marked_name(functor_j(k), key.substr(p), distinguished_points(k));
    };
    auto bottom = shifted(Q.excluded_bottom(L + p - 1), -(p - 1));
    auto raw = finish(F, Built{basis, b, namer});
    auto cc = std::make_shared<const ChainComplex>(raw->with_window(high_cut_window(bottom, *raw, 0, false)));
    auto tau = endo(F, cc, *basis, 0, rot);
    if (v == CobarVariant::pfold_cocyclic) return {cc, tau, std::nullopt};
    if (F.p() != static_cast<std::uint32_t>(p))
        throw std::invalid_argument("cobar_totalization: p must equal the characteristic of the field");
    // x t^k -> b x t^k + (-1)^{|x|} N x t^{k-1} theta, x t^k theta -> b x t^k theta + (-1)^{|x|} (tau - 1) x t^k.
    SeriesShape shape{SeriesVariable::t_dual, true, N, "t̃", "θ̃"};
    std::vector<SeriesTerm> terms{{0, 1, -1, norm_operator(tau, p), true, 1},
                                  {1, 0, 0, tau_minus_one_power(tau, 1), true, 1}};
    auto s = SeriesComplex::build(cc, shape, terms, DegreeWindow::none());
    s = s.with_window(high_cut_window(bottom, *s.complex(), 2 * N + 1, true));
    return {s.complex(), tau, s};
}

// ---------------------------------------------------------------------------
// Relations

namespace {

std::vector<Decorated> generators(const CyclicModule& q, int max_object) {
    std::vector<Decorated> gens;
    for (int n = 0; n <= max_object; ++n) {
        for (int k = 0; k <= n; ++k)
            gens.push_back(Decorated{CyclicMorphism::rotation(n, k), std::vector<PlanarTree>(n + 1, PlanarTree::identity())});
        for (auto& f : faces(n, q.top_arity(), true)) gens.push_back(std::move(f.g));
        if (q.unital() && n + 1 <= max_object)
            for (int i = 0; i <= n; ++i) {
                std::vector<int> lift(n + 1);
                for (int j = 0; j <= n; ++j) lift[j] = j <= i ? j : j + 1;
                gens.push_back(corolla_decoration(CyclicMorphism(std::move(lift), n + 1)));
            }
    }
    return gens;
}

Terms sorted(Terms t, const PrimeField& F) {
    collect(t, F);
    std::sort(t.begin(), t.end());
    return t;
}

std::vector<std::string> keys_of(const KeyedBasis& b) {
    std::vector<std::string> out;
    for_each_key(b, [&](int, const std::string& k) { out.push_back(k); });
    return out;
}

// d of a decorated morphism: the Koszul sum of the cell boundaries.
SemidirectChain boundary(const Decorated& g, const PrimeField& F) {
    SemidirectChain out;
    int before = 0;
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
        if (!g.cells[i].is_identity() && !g.cells[i].is_unit()) {
            const auto db = boundary(g.cells[i], F);
            for (const auto& [t, c] : db.terms()) {
                Decorated h = g;
                h.cells[i] = t;
                auto& slot = out[h];
                slot = F.add(slot, F.mul(F.sign(before), c));
            }
        }
        before += g.cells[i].degree();
    }
    return out;
}

Terms act_chain(const CyclicModule& q, const SemidirectChain& c, const std::string& x) {
    const auto& F = q.field();
    Terms out, tmp;
    for (const auto& [h, v] : c) {
        tmp.clear();
        q.act(h, x, tmp);
        for (auto& [k, w] : tmp) out.emplace_back(std::move(k), F.mul(v, w));
    }
    return out;
}

}  // namespace

CheckReport check_module_relations(const CyclicModule& q, int max_object) {
    if (max_object < 0 || max_object > q.bound())
        throw std::invalid_argument("check_module_relations: objects must lie within the module's bound");
    const auto& F = q.field();
    const auto gens = generators(q, max_object);
    std::size_t pairs = 0, checks = 0;
    for (const auto& f : gens) {
        const int n = f.map.source(), m = f.map.target();
        const auto xs = keys_of(q.object(n));
        KeyOperator qf = [&](const std::string& y, Terms& out) { q.act(f, y, out); };
        KeyOperator dn = [&](const std::string& y, Terms& out) { q.differential(n, y, out); };
        KeyOperator dm = [&](const std::string& y, Terms& out) { q.differential(m, y, out); };
        // d Q(f) - (-1)^{|f|} Q(f) d = Q(d f), |f| = -(cell degrees).
        const auto df = boundary(f, F);
        const Scalar s = F.sign(cells_degree(f.cells));
        for (const auto& x : xs) {
            Terms fx;
            qf(x, fx);
            Terms lhs = apply(dm, fx, F);
            Terms dx;
            dn(x, dx);
            for (auto& [k, v] : apply(qf, dx, F)) lhs.emplace_back(std::move(k), F.neg(F.mul(s, v)));
            ++checks;
            if (sorted(lhs, F) != sorted(act_chain(q, df, x), F))
                return {false, "d Q(g) - (-1)^{|g|} Q(g) d != Q(dg) for g = " + f.map.to_string() + " on " + q.name(n, x),
                        std::nullopt};
        }
        for (const auto& g : gens) {
            if (g.map.source() != m) continue;
            ++pairs;
            const auto gf = compose(SemidirectChain{{g, 1}}, SemidirectChain{{f, 1}}, F);
            KeyOperator qg = [&](const std::string& y, Terms& out) { q.act(g, y, out); };
            for (const auto& x : xs) {
                Terms fx;
                qf(x, fx);
                ++checks;
                if (sorted(act_chain(q, gf, x), F) != sorted(apply(qg, fx, F), F))
                    return {false, "Q(g o f) != Q(g) Q(f) for g = " + g.map.to_string() + ", f = " + f.map.to_string() +
                                       " on " + q.name(n, x),
                            std::nullopt};
            }
        }
    }
    return {true, std::to_string(pairs) + " generator pairs, " + std::to_string(checks) + " checks", std::nullopt};
}

std::string to_string(HUnitality h) {
    switch (h) {
        case HUnitality::h_unital: return "H-unital";
        case HUnitality::not_h_unital: return "not H-unital";
        case HUnitality::undetermined: return "undetermined";
    }
    return "?";
}

HUnitalityReport h_unitality_check(const CyclicModule& q, int L) {
    auto t = bar_totalization(q, BarVariant::bar, L);
    HUnitalityReport r;
    r.window = t.complex->window();
    r.homology = homology(*t.complex);
    if (r.window.empty()) {
        r.detail = "no stable window at L = " + std::to_string(L);
        return r;
    }
    for (int n : r.homology.stable_degrees())
        if (r.homology.dim(n) != 0) {
            r.verdict = HUnitality::not_h_unital;
            r.detail = "bar homology of dimension " + std::to_string(r.homology.dim(n)) + " in stable degree " +
                       std::to_string(n);
            return r;
        }
    r.verdict = HUnitality::h_unital;
    r.detail = "bar homology vanishes on [" + std::to_string(r.window.lo) + ", " + std::to_string(r.window.hi) + "]";
    return r;
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

using MorChain = std::map<CyclicMorphism, Scalar>;
using NuChain = std::map<std::pair<CyclicMorphism, int>, Scalar>;

template <class K>
void add_to(std::map<K, Scalar>& v, const K& k, Scalar c, const PrimeField& F) {
    if (c == 0) return;
    auto& slot = v[k];
    slot = F.add(slot, c);
    if (slot == 0) v.erase(k);
}

CyclicMorphism coface_zero(int n) {  // [n] -> [n+1], i -> i+1
    std::vector<int> lift(n + 1);
    for (int j = 0; j <= n; ++j) lift[j] = j + 1;
    return CyclicMorphism(std::move(lift), n + 1);
}

// Image contains every marked point 1..n: not in the image of a degeneracy.
bool nondegenerate(const CyclicMorphism& f) {
    const int n = f.target();
    std::vector<bool> hit(n + 1, false);
    for (int i = 0; i <= f.source(); ++i) hit[static_cast<std::size_t>(((f.at(i) % (n + 1)) + n + 1) % (n + 1))] = true;
    for (int j = 1; j <= n; ++j)
        if (!hit[j]) return false;
    return true;
}

struct SplitCalculus {
    PrimeField F;

    MorChain b(const CyclicMorphism& f, bool wrap) const {
        MorChain out;
        const int n = f.target();
        for (int r = 0; r < n; ++r) add_to(out, compose(arc_face(n, r, 2), f), F.sign(r), F);
        if (wrap && n > 0) add_to(out, compose(wrap_face(n, 1, 0), f), F.sign(n), F);
        return out;
    }
    // Connes-signed tau and its norm.
    MorChain norm(const CyclicMorphism& f) const {
        MorChain out;
        const int n = f.target();
        CyclicMorphism cur = f;
        Scalar s = 1;
        for (int i = 0; i <= n; ++i) {
            add_to(out, cur, s, F);
            cur = compose(CyclicMorphism::rotation(n, 1), cur);
            s = F.mul(s, F.sign(n));
        }
        return out;
    }
    NuChain d_nu(const CyclicMorphism& f, int e) const {
        NuChain out;
        const int n = f.target();
        if (e == 0) {
            for (const auto& [g, c] : b(f, true)) add_to(out, {g, 0}, c, F);
            return out;
        }
        for (const auto& [g, c] : b(f, false)) add_to(out, {g, 1}, c, F);
        const Scalar s = F.sign(n);  // |x| = -n
        add_to(out, {compose(CyclicMorphism::rotation(n, 1), f), 0}, F.mul(s, F.sign(n)), F);
        add_to(out, {f, 0}, F.neg(s), F);
        return out;
    }
    NuChain connes_nu(const CyclicMorphism& f, int e) const {
        NuChain out;
        if (e == 0)
            for (const auto& [g, c] : norm(f)) add_to(out, {g, 1}, F.mul(c, F.sign(f.target())), F);
        return out;
    }
    MorChain reduce(MorChain v) const {
        std::erase_if(v, [](const auto& kv) { return !nondegenerate(kv.first); });
        return v;
    }
    MorChain b_bar(const MorChain& v) const {
        MorChain out;
        for (const auto& [f, c] : v)
            for (const auto& [g, w] : b(f, true)) add_to(out, g, F.mul(c, w), F);
        return reduce(out);
    }
    MorChain connes_bar(const MorChain& v) const {
        MorChain out;
        for (const auto& [f, c] : v)
            for (const auto& [g, w] : norm(f)) add_to(out, compose(coface_zero(g.target()), g), F.neg(F.mul(c, w)), F);
        return reduce(out);
    }
    MorChain phi(const CyclicMorphism& f, int e) const {
        if (e == 0) return {{f, 1}};
        return {{compose(coface_zero(f.target()), f), F.sign(f.target() + 1)}};
    }
    MorChain phi(const NuChain& v) const {
        MorChain out;
        for (const auto& [fe, c] : v)
            for (const auto& [g, w] : phi(fe.first, fe.second)) add_to(out, g, F.mul(c, w), F);
        return out;
    }
};

}  // namespace

NormalizationReport normalized_split_check(int m, int L, const PrimeField& field) {
    if (m < 0 || m > 3 || L < 1 || L > 5) throw std::invalid_argument("normalized_split_check: need m <= 3 and 1 <= L <= 5");
    NormalizationReport r;
    r.m = m;
    r.L = L;
    SplitCalculus S{field};
    std::vector<std::vector<CyclicMorphism>> all(L + 1), surj(L + 1);
    for (int n = 0; n <= L; ++n) {
        all[n] = enumerate_hom(m, n);
        for (const auto& f : all[n])
            if (f.surjective()) surj[n].push_back(f);
    }

    // Phi is a bijection onto the nondegenerate elements of levels <= L.
    r.bijective = true;
    for (int n = 0; n <= L && r.bijective; ++n) {
        std::set<CyclicMorphism> image;
        for (const auto& f : surj[n]) image.insert(f);
        if (n > 0)
            for (const auto& f : surj[n - 1]) image.insert(S.phi(f, 1).begin()->first);
        std::set<CyclicMorphism> nondeg;
        for (const auto& f : all[n])
            if (nondegenerate(f)) nondeg.insert(f);
        std::size_t expected = surj[n].size() + (n > 0 ? surj[n - 1].size() : 0);
        if (image != nondeg || image.size() != expected) {
            r.bijective = false;
            r.detail = "Phi is not a bijection onto the nondegenerate basis at level " + std::to_string(n);
        }
    }

    r.differentials = r.epsilon = true;
    for (int n = 0; n <= L; ++n)
        for (const auto& f : surj[n])
            for (int e = 0; e <= 1; ++e) {
                ++r.checked;
                if (S.reduce(S.phi(S.d_nu(f, e))) != S.b_bar(S.phi(f, e)) && r.differentials) {
                    r.differentials = false;
                    r.detail = "Phi d != b-bar Phi on " + f.to_string() + (e ? " e" : "");
                }
                if (S.reduce(S.phi(S.connes_nu(f, e))) != S.connes_bar(S.phi(f, e)) && r.epsilon) {
                    r.epsilon = false;
                    r.detail = "Phi B^nu != B-bar Phi on " + f.to_string() + (e ? " e" : "");
                }
            }

    r.anticommute = true;
    for (int n = 0; n <= L; ++n)
        for (const auto& f : all[n]) {
            if (!nondegenerate(f)) continue;
            MorChain x{{f, 1}};
            MorChain sum = S.b_bar(S.connes_bar(x));
            for (const auto& [g, c] : S.connes_bar(S.b_bar(x))) add_to(sum, g, c, field);
            if (!sum.empty() && r.anticommute) {
                r.anticommute = false;
                r.detail = "b-bar B-bar + B-bar b-bar != 0 on " + f.to_string();
            }
        }

    // Degenerate subcomplex and projection, levels <= L, element of level n in degree -n.
    auto key = [](const CyclicMorphism& f) { return header(f.target()) + lift_key(f); };
    auto unkey = [](const std::string& k) { return lift_from_key(k.substr(1), k[0]); };
    auto full = std::make_shared<KeyedBasis>(), degen = std::make_shared<KeyedBasis>(), norm = std::make_shared<KeyedBasis>();
    for (int n = 0; n <= L; ++n)
        for (const auto& f : all[n]) {
            full->insert(-n, key(f));
            (nondegenerate(f) ? norm : degen)->insert(-n, key(f));
        }
    KeyOperator b = [&](const std::string& k, Terms& out) {
        for (const auto& [g, c] : S.b(unkey(k), true)) out.emplace_back(key(g), c);
    };
    KeyOperator b_bar = [&](const std::string& k, Terms& out) {
        for (const auto& [g, c] : S.b_bar({{unkey(k), 1}})) out.emplace_back(key(g), c);
    };
    KeyOperator proj = [&](const std::string& k, Terms& out) {
        if (nondegenerate(unkey(k))) out.emplace_back(k, 1);
    };
    const DegreeWindow w{-L + 1, 0};
    KeyNamer namer = [unkey](const std::string& k) { return unkey(k).to_string(); };
    auto cc = std::make_shared<const ChainComplex>(build_complex(field, full, b, w, namer));
    auto dd = std::make_shared<const ChainComplex>(build_complex(field, degen, b, w, namer));
    auto nn = std::make_shared<const ChainComplex>(build_complex(field, norm, b_bar, w, namer));
    auto hd = homology(*dd);
    r.degenerate_acyclic = true;
    for (int n : hd.stable_degrees())
        if (hd.dim(n) != 0) {
            r.degenerate_acyclic = false;
            r.detail = "degenerate subcomplex has homology in degree " + std::to_string(n);
        }
    ChainMap pr(cc, nn, 0, build_components(field, *full, *norm, 0, proj));
    auto qi = verify_chain_map(pr, MapCheck::quasi_iso);
    r.projection_quasi_iso = qi.ok;
    if (!qi.ok) r.detail = "projection: " + qi.detail;
    if (r.ok())
        r.detail = std::to_string(r.checked) + " basis checks; projection " + qi.detail;
    return r;
}

// ---------------------------------------------------------------------------
// Decalage

void MultisimplicialModule::act(const std::vector<CyclicMorphism>& parts, const std::string& key, Terms& out) const {
    base->act(corolla_decoration(functor_o(parts)), key, out);
}

MultisimplicialModule decalage(std::shared_ptr<const CyclicModule> x, int p) {
    if (!x->plain()) throw std::invalid_argument("decalage: needs a plain simplicial chain complex");
    if (p < 1) throw std::invalid_argument("decalage: p must be positive");
    return {std::move(x), p};
}

namespace {

// The i-th face [n] -> [n-1] of Delta^op; i = n merges the last point with the endpoint.
CyclicMorphism simplicial_face(int n, int i) { return i < n ? arc_face(n, i, 2) : wrap_face(n, 1, 0); }

}  // namespace

ChainMap::Ptr simplicial_bar_complex(const CyclicModule& x, int L) {
    if (!x.plain()) throw std::invalid_argument("simplicial_bar_complex: needs a plain simplicial chain complex");
    if (L < 0) throw std::invalid_argument("simplicial_bar_complex: L must be nonnegative");
    check_bound(L, x.bound(), "simplicial_bar_complex");
    const auto& F = x.field();
    auto basis = std::make_shared<KeyedBasis>(x.object(0).grading());
    for (int n = 0; n <= L; ++n)
        for_each_key(x.object(n), [&](int deg, const std::string& k) { basis->insert(deg - n, header(n) + k); });
    KeyOperator d = [&](const std::string& key, Terms& out) {
        const int n = key[0];
        const std::string y = key.substr(1);
        Terms tmp;
        x.differential(n, y, tmp);
        scale_into(tmp, F.sign(n), header(n), out, F);
        for (int i = 0; n > 0 && i <= n; ++i) {
            x.act(corolla_decoration(simplicial_face(n, i)), y, tmp);
            scale_into(tmp, F.sign(i), header(n - 1), out, F);
        }
    };
    KeyNamer namer = [self = x.shared_from_this()](const std::string& k) { return self->name(k[0], k.substr(1)); };
    auto raw = finish(F, Built{basis, d, namer});
    return std::make_shared<const ChainComplex>(raw->with_window(low_cut_window(x.excluded_top(L), *raw, 0)));
}

ChainMap::Ptr multisimplicial_bar_complex(const MultisimplicialModule& dec, int L) {
    if (L < 0) throw std::invalid_argument("multisimplicial_bar_complex: L must be nonnegative");
    const int p = dec.p;
    const auto& X = *dec.base;
    check_bound(L + p - 1, X.bound(), "multisimplicial_bar_complex");
    const auto& F = X.field();
    auto basis = std::make_shared<KeyedBasis>(X.object(0).grading());
    for (const auto& k : pobjects_up_to(p, L)) {
        const int K = functor_o(k) - p + 1;
        for_each_key(dec.object(k), [&](int deg, const std::string& y) { basis->insert(deg - K, header(k) + y); });
    }
    KeyOperator d = [&](const std::string& key, Terms& out) {
        const PObject k(key.begin(), key.begin() + p);
        const std::string y = key.substr(p);
        const int n = functor_o(k);
        Terms tmp;
        X.differential(n, y, tmp);
        scale_into(tmp, F.sign(n - p + 1), header(k), out, F);
        int before = 0;
        for (int l = 0; l < p; ++l) {
            for (int i = 0; k[l] > 0 && i <= k[l]; ++i) {
                std::vector<CyclicMorphism> parts;
                for (int r = 0; r < p; ++r) parts.push_back(r == l ? simplicial_face(k[l], i) : CyclicMorphism::identity(k[r]));
                dec.act(parts, y, tmp);
                PObject target = k;
                --target[l];
                scale_into(tmp, F.sign(i + before), header(target), out, F);
            }
            before += k[l];
        }
    };
    KeyNamer namer = [self = X.shared_from_this(), p](const std::string& key) {
        const PObject k(key.begin(), key.begin() + p);
        return self->marked_name(functor_o(k), key.substr(p), distinguished_points(k));
    };
    auto raw = finish(F, Built{basis, d, namer});
    auto top = shifted(X.excluded_top(L + p - 1), p - 1);
    return std::make_shared<const ChainComplex>(raw->with_window(low_cut_window(top, *raw, 0)));
}

DecalageReport decalage_check(std::shared_ptr<const CyclicModule> x, int p, int L) {
    auto dec = decalage(x, p);
    auto bar = simplicial_bar_complex(*x, L);
    auto multi = multisimplicial_bar_complex(dec, L);
    DecalageReport r;
    r.bar = homology(*bar);
    r.multi = homology(*multi);
    const auto a = bar->window(), b = multi->window();
    r.window = {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
    if (a.empty() || b.empty() || r.window.empty()) {
        r.window = DegreeWindow::none();
        r.detail = "no common stable window";
        return r;
    }
    r.ok = true;
    for (int n = r.window.lo; n <= r.window.hi; ++n)
        if (r.bar.dim(n) != r.multi.dim(n)) {
            r.ok = false;
            r.detail = "degree " + std::to_string(n) + ": " + std::to_string(r.bar.dim(n)) + " vs " +
                       std::to_string(r.multi.dim(n));
            return r;
        }
    r.detail = "stable dims agree on [" + std::to_string(r.window.lo) + ", " + std::to_string(r.window.hi) + "]";
    return r;
}

// ---------------------------------------------------------------------------

std::optional<ChainMap> basis_matching(const ChainMap::Ptr& source, const ChainMap::Ptr& target,
                                       const std::function<Scalar(int, std::size_t)>& sign,
                                       const std::function<std::string(const std::string&)>& rename) {
    const auto& sb = source->basis();
    const auto& tb = target->basis();
    if (sb.dims() != tb.dims()) return std::nullopt;
    std::map<int, SparseMatrix> comps;
    for (auto [deg, n] : sb.dims()) {
        std::unordered_map<std::string, std::uint32_t> index;
        for (std::size_t i = 0; i < n; ++i) index.emplace(tb.name(deg, i), static_cast<std::uint32_t>(i));
        SparseMatrix mat(n, 0);
        for (std::size_t j = 0; j < n; ++j) {
            std::string name = sb.name(deg, j);
            if (rename) name = rename(name);
            auto it = index.find(name);
            if (it == index.end()) return std::nullopt;
            Entry e{it->second, sign(deg, j)};
            mat.push_column(std::span<const Entry>(&e, 1));
        }
        comps.emplace(deg, std::move(mat));
    }
    return ChainMap(source, target, 0, std::move(comps));
}

}  // namespace cychom
