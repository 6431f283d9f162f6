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

#include "cychom/hochschild.hpp"

#include <functional>
#include <stdexcept>

namespace cychom {

namespace {

constexpr unsigned char kMark = 0x80;

Elem elem_of(char c) { return static_cast<Elem>(static_cast<unsigned char>(c) & 0x7f); }
bool marked(char c) { return static_cast<unsigned char>(c) & kMark; }
char slot(Elem e, bool mark) { return static_cast<char>(e | (mark ? kMark : 0)); }

// Hochschild-type operators in the shifted model, where every slot carries its
// reduced degree and all signs are Koszul signs of reduced degrees.
class ShiftedWords {
public:
    explicit ShiftedWords(const AInfAlgebra& a) : a_(a), F_(a.field()) {
        if (a.dim() > 127) throw std::invalid_argument("Hochschild complexes need at most 127 basis elements");
        for (std::size_t i = 0; i < a.dim(); ++i) red_.push_back(a.reduced_degree(static_cast<Elem>(i)));
        top_ = a.top_arity();
    }

    int red(char c) const { return red_[elem_of(c)]; }
    int reduced(std::string_view w) const {
        int s = 0;
        for (char c : w) s += red(c);
        return s;
    }

    // Sum over arcs holding at most one distinguished slot of mu applied to the
    // arc. Wrapped arcs first rotate the tail to the front.
    void differential(const std::string& w, bool wrap, Scalar coeff, Terms& out) const {
        const std::size_t n = w.size();
        const std::size_t smax = std::min<std::size_t>(n, top_);
        std::vector<Elem> buf;
        std::string rotated;
        int prefix = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t s = 1; s <= smax; ++s) {
                bool wraps = i + s > n;
                if (wraps && !wrap) break;
                const std::string* src = &w;
                std::size_t start = i;
                Scalar sg = F_.sign(prefix);
                if (wraps) {
                    std::string_view tail(w.data() + i, n - i), rest(w.data(), i);
                    rotated.assign(tail);
                    rotated.append(rest);
                    src = &rotated;
                    start = 0;
                    sg = F_.sign(static_cast<long long>(reduced(tail)) * reduced(rest));
                }
                buf.clear();
                int marks = 0;
                for (std::size_t j = start; j < start + s; ++j) {
                    buf.push_back(elem_of((*src)[j]));
                    marks += marked((*src)[j]);
                }
                if (marks > 1) continue;
                const auto& res = a_.mu_shifted(buf);
                for (const auto& t : res) {
                    std::string nw = src->substr(0, start);
                    nw.push_back(slot(t.out, marks == 1));
                    nw.append(*src, start + s);
                    out.emplace_back(std::move(nw), F_.mul(coeff, F_.mul(sg, t.coeff)));
                }
            }
            prefix += red(w[i]);
        }
    }

    // Moves the trailing `len` slots to the front.
    Term rotate(const std::string& w, std::size_t len, Scalar coeff) const {
        std::string_view tail(w.data() + w.size() - len, len), rest(w.data(), w.size() - len);
        std::string nw(tail);
        nw.append(rest);
        return {std::move(nw), F_.mul(coeff, F_.sign(static_cast<long long>(reduced(tail)) * reduced(rest)))};
    }
    Term rotate_slot(const std::string& w, Scalar coeff) const { return rotate(w, 1, coeff); }
    Term rotate_block(const std::string& w, Scalar coeff) const {
        std::size_t last = w.size();
        while (last > 0 && !marked(w[last - 1])) --last;
        if (last == 0) throw std::logic_error("rotate_block: word without distinguished slot");
        return rotate(w, w.size() - (last - 1), coeff);
    }

    // Diagonal signs relating the shifted model to the public conventions.
    bool psi(std::string_view w) const {
        long long e = 0;
        const long long n = static_cast<long long>(w.size()) - 1;
        for (std::size_t j = 0; j < w.size(); ++j) e += (n - static_cast<long long>(j)) * (red(w[j]) + 1);
        return e & 1;
    }
    bool phi(std::string_view w) const {
        long long e = 0, before = 0;
        for (char c : w) {
            if (marked(c)) e += before;
            before += red(c);
        }
        return e & 1;
    }

    const AInfAlgebra& algebra() const { return a_; }
    const PrimeField& field() const { return F_; }
    int max_red() const {
        int m = red_.empty() ? 0 : red_[0];
        for (int r : red_) m = std::max(m, r);
        return m;
    }

private:
    const AInfAlgebra& a_;
    const PrimeField& F_;
    std::vector<int> red_;
    int top_ = 0;
};

// Conjugates a shifted-model operator by a diagonal sign.
KeyOperator conjugate(KeyOperator op, std::function<bool(std::string_view)> sign, const PrimeField& F) {
    return [op = std::move(op), sign = std::move(sign), &F](const std::string& key, Terms& out) {
        std::size_t first = out.size();
        op(key, out);
        bool s = sign(key);
        for (std::size_t i = first; i < out.size(); ++i)
            if (s != sign(out[i].first)) out[i].second = F.neg(out[i].second);
    };
}

// Every word of length 1..L+1 whose degree (+ offset) is at least floor.
void enumerate_cyclic_words(const ShiftedWords& W, int L, std::optional<int> floor,
                            const std::function<void(const std::string&, int)>& emit) {
    const auto& a = W.algebra();
    const int dim = static_cast<int>(a.dim());
    const int mr = W.max_red();
    std::string w;
    std::function<void(int, int)> rec = [&](int remaining, int deg) {
        if (floor && mr <= 0 && deg + remaining * mr < *floor) return;
        if (remaining == 0) {
            emit(w, deg);
            return;
        }
        for (int e = 0; e < dim; ++e) {
            w.push_back(slot(static_cast<Elem>(e), false));
            rec(remaining - 1, deg + a.reduced_degree(static_cast<Elem>(e)));
            w.pop_back();
        }
    };
    for (int len = 1; len <= L + 1; ++len) rec(len, 1);
}

void enumerate_pwords(const ShiftedWords& W, int p, int L, std::optional<int> floor,
                      const std::function<void(const std::string&, int)>& emit) {
    const auto& a = W.algebra();
    const int dim = static_cast<int>(a.dim());
    const int mr = W.max_red();
    std::vector<int> blocks(p, 0);
    std::vector<bool> marks;
    std::string w;
    std::function<void(std::size_t, int)> fill = [&](std::size_t pos, int deg) {
        int remaining = static_cast<int>(marks.size() - pos);
        if (floor && mr <= 0 && deg + remaining * mr < *floor) return;
        if (remaining == 0) {
            emit(w, deg);
            return;
        }
        for (int e = 0; e < dim; ++e) {
            w.push_back(slot(static_cast<Elem>(e), marks[pos]));
            fill(pos + 1, deg + a.reduced_degree(static_cast<Elem>(e)));
            w.pop_back();
        }
    };
    std::function<void(int, int)> choose = [&](int i, int budget) {
        if (i == p) {
            marks.clear();
            for (int b : blocks) {
                marks.push_back(true);
                for (int j = 0; j < b; ++j) marks.push_back(false);
            }
            fill(0, p);
            return;
        }
        for (int k = 0; k <= budget; ++k) {
            blocks[i] = k;
            choose(i + 1, budget - k);
        }
    };
    choose(0, L);
}

std::string slots_name(const std::vector<std::string>& names, std::string_view slots) {
    std::string s;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (i) s += "|";
        const auto& n = names[elem_of(slots[i])];
        s += marked(slots[i]) ? "[" + n + "]" : n;
    }
    return s;
}

// Names outlive the algebra, so the namer keeps its own copy.
KeyNamer namer_for(const AInfAlgebra& a, std::size_t header = 0, std::string suffix_if_set = {}) {
    std::vector<std::string> names;
    for (const auto& b : a.basis()) names.push_back(b.name);
    return [names = std::move(names), header, suffix_if_set](const std::string& key) {
        std::string name = slots_name(names, std::string_view(key).substr(header));
        if (header && key[0]) name += suffix_if_set;
        return name;
    };
}

std::shared_ptr<KeyedBasis> cyclic_basis(const ShiftedWords& W, const AInfAlgebra& a, int L, std::optional<int> floor) {
    auto basis = std::make_shared<KeyedBasis>(a.grading());
    enumerate_cyclic_words(W, L, floor, [&](const std::string& w, int deg) { basis->insert(deg, w); });
    return basis;
}

}  // namespace

std::string word_name(const AInfAlgebra& a, const std::string& slots) {
    std::vector<std::string> names;
    for (const auto& b : a.basis()) names.push_back(b.name);
    return slots_name(names, slots);
}

int word_degree(const AInfAlgebra& a, const std::string& slots) {
    int d = 1;
    for (char c : slots) d += a.reduced_degree(elem_of(c));
    return d;
}

std::optional<int> excluded_top_cc(const AInfAlgebra& a, int L) {
    int m = a.max_degree() - 1;
    if (a.grading() != Grading::Z || m >= 0) return std::nullopt;
    return (L + 2) * m + 1;
}

std::optional<int> excluded_top_pfold(const AInfAlgebra& a, int p, int L) {
    int m = a.max_degree() - 1;
    if (a.grading() != Grading::Z || m >= 0) return std::nullopt;
    return (p + L + 1) * m + p;
}

namespace {

DegreeWindow plain_window(std::optional<int> q, const ChainComplex& c, std::optional<int> floor) {
    if (!q || c.grading() != Grading::Z) return DegreeWindow::none();
    auto top = c.basis().max_degree();
    if (!top) return DegreeWindow::none();
    int lo = *q + 2;
    if (floor) lo = std::max(lo, *floor + 1);
    return {lo, *top};
}

}  // namespace

DegreeWindow hochschild_window(const AInfAlgebra& a, const ChainComplex& c, WordTruncation tr) {
    return plain_window(excluded_top_cc(a, tr.L), c, tr.floor);
}

DegreeWindow pfold_window(const AInfAlgebra& a, int p, const ChainComplex& c, WordTruncation tr) {
    return plain_window(excluded_top_pfold(a, p, tr.L), c, tr.floor);
}

DegreeWindow series_window(std::optional<int> excluded_top, const SeriesShape& shape, const ChainComplex& total,
                           std::optional<int> floor) {
    if (!excluded_top || total.grading() != Grading::Z || shape.variable != SeriesVariable::t)
        return DegreeWindow::none();
    return plain_window(*excluded_top + 2 * shape.N + (shape.theta ? 1 : 0), total, floor);
}

ChainMap::Ptr hochschild_complex(const AInfAlgebra& a, WordTruncation tr) {
    if (tr.L < 0) throw std::invalid_argument("hochschild_complex: L must be nonnegative");
    ShiftedWords W(a);
    auto basis = cyclic_basis(W, a, tr.L, tr.floor);
    const auto& F = a.field();
    KeyOperator b = [&W](const std::string& w, Terms& out) { W.differential(w, true, 1, out); };
    auto d = conjugate(b, [&W](std::string_view w) { return W.psi(w); }, F);
    auto c = build_complex(F, basis, d, DegreeWindow::none(), namer_for(a));
    return std::make_shared<const ChainComplex>(c.with_window(hochschild_window(a, c, tr)));
}

ChainMap::Ptr bar_complex(const AInfAlgebra& a, WordTruncation tr) {
    if (tr.L < 0) throw std::invalid_argument("bar_complex: L must be nonnegative");
    ShiftedWords W(a);
    auto basis = cyclic_basis(W, a, tr.L, tr.floor);
    const auto& F = a.field();
    KeyOperator b = [&W](const std::string& w, Terms& out) { W.differential(w, false, 1, out); };
    auto d = conjugate(b, [&W](std::string_view w) { return W.psi(w); }, F);
    auto c = build_complex(F, basis, d, DegreeWindow::none(), namer_for(a));
    return std::make_shared<const ChainComplex>(c.with_window(hochschild_window(a, c, tr)));
}

CyclicWordComplex hochschild_complex_with_tau(const AInfAlgebra& a, WordTruncation tr) {
    auto cc = hochschild_complex(a, tr);
    ShiftedWords W(a);
    auto basis = cyclic_basis(W, a, tr.L, tr.floor);
    const auto& F = a.field();
    KeyOperator r = [&W](const std::string& w, Terms& out) { out.push_back(W.rotate_slot(w, 1)); };
    auto tau = conjugate(r, [&W](std::string_view w) { return W.psi(w); }, F);
    return {cc, ChainMap(cc, cc, 0, build_components(F, *basis, *basis, 0, tau))};
}

PFoldComplex pfold_complex(const AInfAlgebra& a, int p, WordTruncation tr) {
    if (p < 3) throw std::invalid_argument("pfold_complex: p must be at least 3 (p = 2 needs a separate treatment)");
    if (tr.L < 0) throw std::invalid_argument("pfold_complex: L must be nonnegative");
    ShiftedWords W(a);
    auto basis = std::make_shared<KeyedBasis>(a.grading());
    enumerate_pwords(W, p, tr.L, tr.floor, [&](const std::string& w, int deg) { basis->insert(deg, w); });
    const auto& F = a.field();
    auto phi = [&W](std::string_view w) { return W.phi(w); };
    KeyOperator b = [&W](const std::string& w, Terms& out) { W.differential(w, true, 1, out); };
    KeyOperator r = [&W](const std::string& w, Terms& out) { out.push_back(W.rotate_block(w, 1)); };
    auto c = build_complex(F, basis, conjugate(b, phi, F), DegreeWindow::none(), namer_for(a));
    auto cc = std::make_shared<const ChainComplex>(c.with_window(pfold_window(a, p, c, tr)));
    return {p, cc, ChainMap(cc, cc, 0, build_components(F, *basis, *basis, 0, conjugate(r, phi, F)))};
}

NonUnitalComplex nonunital_complex(const AInfAlgebra& a, WordTruncation tr) {
    if (tr.L < 0) throw std::invalid_argument("nonunital_complex: L must be nonnegative");
    ShiftedWords W(a);
    const auto& F = a.field();
    auto cc_basis = cyclic_basis(W, a, tr.L, tr.floor);
    auto basis = std::make_shared<KeyedBasis>(a.grading());
    enumerate_cyclic_words(W, tr.L, tr.floor, [&](const std::string& w, int deg) {
        basis->insert(deg, std::string(1, '\0') + w);
        if (!tr.floor || deg - 1 >= *tr.floor) basis->insert(deg - 1, std::string(1, '\1') + w);
    });
    auto degree = [&W](std::string_view w) { return W.reduced(w) + 1; };
    auto psi = [&W](std::string_view key) { return W.psi(key.substr(1)); };

    KeyOperator d = [&](const std::string& key, Terms& out) {
        const std::string w = key.substr(1);
        Terms tmp;
        if (key[0] == 0) {
            W.differential(w, true, 1, tmp);
            for (auto& [k, c] : tmp) out.emplace_back(std::string(1, '\0') + k, c);
            return;
        }
        Scalar s = F.sign(degree(w));
        auto [rw, rc] = W.rotate_slot(w, s);
        out.emplace_back(std::string(1, '\0') + rw, rc);
        out.emplace_back(std::string(1, '\0') + w, F.neg(s));
        W.differential(w, false, 1, tmp);
        for (auto& [k, c] : tmp) out.emplace_back(std::string(1, '\1') + k, c);
    };
    KeyOperator B = [&](const std::string& key, Terms& out) {
        if (key[0] != 0) return;
        std::string w = key.substr(1);
        Scalar c = F.sign(degree(w));
        for (std::size_t i = 0; i < w.size(); ++i) {
            out.emplace_back(std::string(1, '\1') + w, c);
            std::tie(w, c) = W.rotate_slot(w, c);
        }
    };
    KeyOperator incl = [](const std::string& w, Terms& out) { out.emplace_back(std::string(1, '\0') + w, 1); };

    auto c = build_complex(F, basis, conjugate(d, psi, F), DegreeWindow::none(), namer_for(a, 1, "·ε"));
    auto nu = std::make_shared<const ChainComplex>(
        c.with_window(plain_window(excluded_top_cc(a, tr.L), c, tr.floor)));
    auto cc_plain = build_complex(F, cc_basis,
                                  conjugate([&W](const std::string& w, Terms& out) { W.differential(w, true, 1, out); },
                                            [&W](std::string_view w) { return W.psi(w); }, F),
                                  DegreeWindow::none(), namer_for(a));
    auto cc = std::make_shared<const ChainComplex>(cc_plain.with_window(hochschild_window(a, cc_plain, tr)));
    auto connes = ChainMap(nu, nu, -1, build_components(F, *basis, *basis, -1, conjugate(B, psi, F), true));
    // The inclusion is sign-free: both sides use the same diagonal sign on w.
    auto inclusion = ChainMap(cc, nu, 0, build_components(F, *cc_basis, *basis, 0, incl));
    return {cc, nu, std::move(connes), std::move(inclusion)};
}

SeriesComplex negative_cyclic_complex(const NonUnitalComplex& nu, int N, DegreeWindow window,
                                      std::optional<int> floor) {
    SeriesShape shape{SeriesVariable::t, false, N, "t", "θ"};
    std::vector<SeriesTerm> terms{{0, 0, 1, nu.connes, false, 1}};
    return SeriesComplex::build(nu.complex, shape, terms, window, floor);
}

SeriesComplex negative_cyclic_complex(const AInfAlgebra& a, WordTruncation tr, int N) {
    if (N < 0) throw std::invalid_argument("negative_cyclic_complex: N must be nonnegative");
    WordTruncation base = tr;
    if (tr.floor) base.floor = *tr.floor - 2 * N;
    auto nu = nonunital_complex(a, base);
    SeriesShape shape{SeriesVariable::t, false, N, "t", "θ"};
    auto s = negative_cyclic_complex(nu, N, DegreeWindow::none(), tr.floor);
    return s.with_window(series_window(excluded_top_cc(a, tr.L), shape, *s.complex(), tr.floor));
}

SeriesComplex zp_equivariant_complex(const PFoldComplex& pf, int N, DegreeWindow window, std::optional<int> floor) {
    const auto& F = pf.complex->field();
    if (F.p() != static_cast<std::uint32_t>(pf.p))
        throw std::invalid_argument("zp_equivariant_complex: p must equal the characteristic of the field");
    SeriesShape shape{SeriesVariable::t, true, N, "t", "θ"};
    auto tm1 = tau_minus_one_power(pf.tau, 1);
    auto norm = norm_operator(pf.tau, pf.p);
    std::vector<SeriesTerm> terms{{0, 1, 0, tm1, true, 1}, {1, 0, 1, norm, true, 1}};
    return SeriesComplex::build(pf.complex, shape, terms, window, floor);
}

SeriesComplex zp_equivariant_complex(const AInfAlgebra& a, int p, WordTruncation tr, int N) {
    if (N < 0) throw std::invalid_argument("zp_equivariant_complex: N must be nonnegative");
    if (a.field().p() != static_cast<std::uint32_t>(p))
        throw std::invalid_argument("zp_equivariant_complex: p must equal the characteristic of the field");
    WordTruncation base = tr;
    if (tr.floor) base.floor = *tr.floor - 2 * N - 1;
    auto pf = pfold_complex(a, p, base);
    SeriesShape shape{SeriesVariable::t, true, N, "t", "θ"};
    auto s = zp_equivariant_complex(pf, N, DegreeWindow::none(), tr.floor);
    return s.with_window(series_window(excluded_top_pfold(a, p, tr.L), shape, *s.complex(), tr.floor));
}

TThetaOperators t_theta_operators(const AInfAlgebra& a, int p, WordTruncation tr, int N) {
    WordTruncation base = tr;
    if (tr.floor) base.floor = *tr.floor - 2 * N - 1;
    auto pf = pfold_complex(a, p, base);
    SeriesShape shape{SeriesVariable::t, true, N, "t", "θ"};
    auto probe = zp_equivariant_complex(pf, N, DegreeWindow::none(), tr.floor);
    auto s = probe.with_window(series_window(excluded_top_pfold(a, p, tr.L), shape, *probe.complex(), tr.floor));
    const auto& F = a.field();
    auto id = operator_identity(pf.complex);
    auto t_action = s.map_to(s, 2, {{0, 0, 1, id, false, 1}, {1, 1, 1, id, false, 1}});
    auto tm1 = tau_minus_one_power(pf.tau, p - 2);
    auto theta = s.map_to(s, 1, {{0, 1, 0, id, true, 1}, {1, 0, 1, tm1, true, F.neg(1)}});
    return {std::move(s), std::move(t_action), std::move(theta)};
}

}  // namespace cychom
