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

#include "cychom/ainf.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cychom {

namespace {

const Output kZero{};

int fold(int degree, Grading g) { return g == Grading::Z ? degree : ((degree % 2) + 2) % 2; }

void accumulate(Output& out, Elem e, Scalar c, const PrimeField& F) {
    for (auto it = out.begin(); it != out.end(); ++it) {
        if (it->out == e) {
            it->coeff = F.add(it->coeff, c);
            if (it->coeff == 0) out.erase(it);
            return;
        }
    }
    if (c != 0) out.push_back({e, c});
}

std::string tuple_name(const AInfAlgebra& a, std::span<const Elem> xs) {
    std::string s = "(";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + a.name(xs[i]);
    return s + ")";
}

}  // namespace

std::optional<Elem> AInfAlgebra::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (basis_[i].name == name) return static_cast<Elem>(i);
    return std::nullopt;
}

int AInfAlgebra::max_degree() const {
    int m = basis_.empty() ? 0 : basis_[0].degree;
    for (const auto& b : basis_) m = std::max(m, b.degree);
    return m;
}

int AInfAlgebra::min_degree() const {
    int m = basis_.empty() ? 0 : basis_[0].degree;
    for (const auto& b : basis_) m = std::min(m, b.degree);
    return m;
}

const Output& AInfAlgebra::mu(std::span<const Elem> inputs) const {
    auto it = mu_.find(encode(inputs));
    return it == mu_.end() ? kZero : it->second;
}

const Output& AInfAlgebra::mu_shifted(std::span<const Elem> inputs) const {
    auto it = mu_shifted_.find(encode(inputs));
    return it == mu_shifted_.end() ? kZero : it->second;
}

std::vector<MuEntry> AInfAlgebra::entries() const {
    std::vector<MuEntry> out;
    for (const auto& [key, terms] : mu_) {
        std::vector<Elem> in(key.begin(), key.end());
        for (const auto& t : terms) out.push_back({in, t.out, t.coeff});
    }
    std::sort(out.begin(), out.end(), [](const MuEntry& a, const MuEntry& b) {
        if (a.inputs.size() != b.inputs.size()) return a.inputs.size() < b.inputs.size();
        if (a.inputs != b.inputs) return a.inputs < b.inputs;
        return a.output < b.output;
    });
    return out;
}

AInfAlgebra::Builder::Builder(PrimeField field, std::vector<BasisElement> basis, Grading grading, int arity_bound)
    : field_(field), basis_(std::move(basis)), grading_(grading), arity_bound_(arity_bound) {
    if (basis_.size() > 255) throw std::invalid_argument("algebra: at most 255 basis elements");
    if (arity_bound_ < 1) throw std::invalid_argument("algebra: arity bound must be positive");
    std::set<std::string> names;
    for (auto& b : basis_) {
        if (!names.insert(b.name).second) throw std::invalid_argument("algebra: duplicate basis name " + b.name);
        b.degree = fold(b.degree, grading_);
    }
}

Elem AInfAlgebra::Builder::lookup(const std::string& name) const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (basis_[i].name == name) return static_cast<Elem>(i);
    throw std::invalid_argument("algebra: unknown basis element " + name);
}

AInfAlgebra::Builder& AInfAlgebra::Builder::unit(const std::string& name) {
    unit_ = lookup(name);
    return *this;
}

AInfAlgebra::Builder& AInfAlgebra::Builder::mu(const std::vector<std::string>& inputs, const std::string& output,
                                               std::int64_t coeff) {
    std::vector<Elem> in;
    for (const auto& n : inputs) in.push_back(lookup(n));
    return mu(std::move(in), lookup(output), field_.from_int(coeff));
}

AInfAlgebra::Builder& AInfAlgebra::Builder::mu(std::vector<Elem> inputs, Elem output, Scalar coeff) {
    if (inputs.empty()) throw std::invalid_argument("algebra: operations need at least one input");
    if (static_cast<int>(inputs.size()) > arity_bound_)
        throw std::invalid_argument("algebra: operation arity " + std::to_string(inputs.size()) + " exceeds bound " +
                                    std::to_string(arity_bound_));
    for (Elem e : inputs)
        if (e >= basis_.size()) throw std::invalid_argument("algebra: input index out of range");
    if (output >= basis_.size()) throw std::invalid_argument("algebra: output index out of range");
    entries_.push_back({std::move(inputs), output, coeff % field_.p()});
    return *this;
}

AInfAlgebra AInfAlgebra::Builder::build() const {
    AInfAlgebra a(field_);
    a.basis_ = basis_;
    a.unit_ = unit_;
    a.grading_ = grading_;
    a.arity_bound_ = arity_bound_;
    const auto& F = field_;
    for (const auto& e : entries_) {
        int d = static_cast<int>(e.inputs.size());
        int in_deg = 0;
        for (Elem x : e.inputs) in_deg += basis_[x].degree;
        if (fold(in_deg + 2 - d, grading_) != basis_[e.output].degree) {
            std::string msg = "algebra: m_" + std::to_string(d) + "(";
            for (std::size_t i = 0; i < e.inputs.size(); ++i) msg += (i ? "," : "") + basis_[e.inputs[i]].name;
            throw std::invalid_argument(msg + ") -> " + basis_[e.output].name + " has the wrong degree");
        }
        accumulate(a.mu_[encode(e.inputs)], e.output, e.coeff, F);
    }
    for (auto it = a.mu_.begin(); it != a.mu_.end();) {
        if (it->second.empty()) {
            it = a.mu_.erase(it);
            continue;
        }
        std::sort(it->second.begin(), it->second.end(), [](const OutTerm& x, const OutTerm& y) { return x.out < y.out; });
        const auto& key = it->first;
        int d = static_cast<int>(key.size());
        a.top_arity_ = std::max(a.top_arity_, d);
        long long e = 0;
        for (int i = 0; i < d; ++i) e += static_cast<long long>(basis_[static_cast<Elem>(key[i])].degree) * (d - 1 - i);
        Output shifted = it->second;
        if (e & 1)
            for (auto& t : shifted) t.coeff = F.neg(t.coeff);
        a.mu_shifted_[key] = std::move(shifted);
        ++it;
    }
    if (unit_) {
        auto r = check_strict_unit(a);
        if (!r.ok) throw std::invalid_argument("algebra: unit is not strict: " + r.detail);
    }
    return a;
}

RelationReport check_ainf_relations(const AInfAlgebra& a, int d_max) {
    if (d_max > a.arity_bound())
        throw std::invalid_argument("check_ainf_relations: " + std::to_string(d_max) + " exceeds the arity bound " +
                                    std::to_string(a.arity_bound()));
    const auto& F = a.field();
    const int dim = static_cast<int>(a.dim());
    std::vector<Elem> xs, inner;
    for (int n = 1; n <= d_max; ++n) {
        xs.assign(n, 0);
        std::vector<Scalar> acc(dim, 0);
        for (;;) {
            std::fill(acc.begin(), acc.end(), 0);
            for (int s = 1; s <= n; ++s) {
                for (int r = 0; r + s <= n; ++r) {
                    int t = n - r - s;
                    const auto& in = a.mu(std::span<const Elem>(xs.data() + r, s));
                    if (in.empty()) continue;
                    long long koszul = 0;
                    for (int i = 0; i < r; ++i) koszul += a.degree(xs[i]);
                    long long e = r + static_cast<long long>(s) * t + (2 - s) * koszul;
                    Scalar sg = F.sign(e);
                    for (const auto& term : in) {
                        inner.assign(xs.begin(), xs.begin() + r);
                        inner.push_back(term.out);
                        inner.insert(inner.end(), xs.begin() + r + s, xs.end());
                        for (const auto& outer : a.mu(inner))
                            acc[outer.out] = F.add(acc[outer.out], F.mul(sg, F.mul(term.coeff, outer.coeff)));
                    }
                }
            }
            for (int o = 0; o < dim; ++o) {
                if (acc[o] != 0) {
                    RelationReport rep;
                    rep.ok = false;
                    rep.arity = n;
                    rep.inputs = xs;
                    rep.detail = "relation with " + std::to_string(n) + " inputs fails on " + tuple_name(a, xs) +
                                 " (component " + a.name(static_cast<Elem>(o)) + ")";
                    return rep;
                }
            }
            int i = n - 1;
            while (i >= 0 && xs[i] + 1 == dim) xs[i--] = 0;
            if (i < 0) break;
            ++xs[i];
        }
    }
    return {};
}

RelationReport check_strict_unit(const AInfAlgebra& a) {
    if (!a.unit()) return {false, 0, {}, "no designated unit"};
    Elem u = *a.unit();
    if (a.degree(u) != 0) return {false, 0, {u}, "unit must have degree 0"};
    for (std::size_t x = 0; x < a.dim(); ++x) {
        Elem e = static_cast<Elem>(x);
        for (auto pair : {std::array<Elem, 2>{u, e}, std::array<Elem, 2>{e, u}}) {
            const auto& out = a.mu(pair);
            if (out.size() != 1 || out[0].out != e || out[0].coeff != 1)
                return {false, 2, {pair[0], pair[1]}, "m_2 with the unit is not the identity on " + a.name(e)};
        }
    }
    for (const auto& entry : a.entries()) {
        if (entry.inputs.size() == 2) continue;
        if (std::find(entry.inputs.begin(), entry.inputs.end(), u) != entry.inputs.end())
            return {false, static_cast<int>(entry.inputs.size()), entry.inputs,
                    "operation of arity " + std::to_string(entry.inputs.size()) + " is nonzero on the unit"};
    }
    return {};
}

namespace {

using Col = std::vector<Scalar>;

// Coordinates of v in the span of cols, if it lies there.
std::optional<Col> solve(const std::vector<Col>& cols, const Col& v, const PrimeField& F) {
    std::size_t rows = v.size(), n = cols.size();
    std::vector<Col> m(rows, Col(n + 1, 0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < rows; ++i) m[i][j] = cols[j][i];
    for (std::size_t i = 0; i < rows; ++i) m[i][n] = v[i];
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows; ++c) {
        std::size_t s = r;
        while (s < rows && m[s][c] == 0) ++s;
        if (s == rows) continue;
        std::swap(m[s], m[r]);
        Scalar inv = F.inv(m[r][c]);
        for (auto& x : m[r]) x = F.mul(x, inv);
        for (std::size_t k = 0; k < rows; ++k) {
            if (k == r || m[k][c] == 0) continue;
            Scalar f = m[k][c];
            for (std::size_t j = 0; j <= n; ++j) m[k][j] = F.sub(m[k][j], F.mul(f, m[r][j]));
        }
        piv.push_back(c);
        ++r;
    }
    for (std::size_t k = r; k < rows; ++k)
        if (m[k][n] != 0) return std::nullopt;
    Col x(n, 0);
    for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = m[k][n];
    return x;
}

// Multilinear extension of m_d to coefficient vectors.
Col apply_m(const AInfAlgebra& a, const std::vector<const Col*>& args) {
    const auto& F = a.field();
    std::size_t d = args.size();
    Col out(a.dim(), 0);
    std::vector<Elem> idx(d, 0);
    for (;;) {
        Scalar c = 1;
        for (std::size_t i = 0; i < d && c; ++i) c = F.mul(c, (*args[i])[idx[i]]);
        if (c)
            for (const auto& t : a.mu(idx)) out[t.out] = F.add(out[t.out], F.mul(c, t.coeff));
        std::size_t i = d;
        while (i > 0 && idx[i - 1] + 1u == a.dim()) idx[--i] = 0;
        if (i == 0) break;
        ++idx[i - 1];
    }
    return out;
}

}  // namespace

UnitalityReport check_cohomological_unit(const AInfAlgebra& a) {
    const auto& F = a.field();
    const std::size_t n = a.dim();
    auto unitvec = [n](std::size_t i) {
        Col v(n, 0);
        v[i] = 1;
        return v;
    };
    auto m1 = [&](const Col& v) { return apply_m(a, {&v}); };
    auto m2 = [&](const Col& x, const Col& y) { return apply_m(a, {&x, &y}); };

    // Cycles: kernel of m1, computed from the matrix of m1.
    std::vector<Col> images;
    for (std::size_t i = 0; i < n; ++i) images.push_back(m1(unitvec(i)));
    std::vector<Col> cycles;
    {
        // Kernel by brute elimination on the n x n matrix with columns = images.
        std::vector<Col> rows(n, Col(n, 0));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) rows[i][j] = images[j][i];
        std::vector<std::size_t> piv;
        std::size_t r = 0;
        for (std::size_t c = 0; c < n && r < n; ++c) {
            std::size_t s = r;
            while (s < n && rows[s][c] == 0) ++s;
            if (s == n) continue;
            std::swap(rows[s], rows[r]);
            Scalar inv = F.inv(rows[r][c]);
            for (auto& x : rows[r]) x = F.mul(x, inv);
            for (std::size_t k = 0; k < n; ++k) {
                if (k == r || rows[k][c] == 0) continue;
                Scalar f = rows[k][c];
                for (std::size_t j = 0; j < n; ++j) rows[k][j] = F.sub(rows[k][j], F.mul(f, rows[r][j]));
            }
            piv.push_back(c);
            ++r;
        }
        std::vector<char> is_piv(n, 0);
        for (auto c : piv) is_piv[c] = 1;
        for (std::size_t f = 0; f < n; ++f) {
            if (is_piv[f]) continue;
            Col v(n, 0);
            v[f] = 1;
            for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = F.neg(rows[k][f]);
            cycles.push_back(v);
        }
    }
    // Boundaries span; homology representatives extend a basis of boundaries inside cycles.
    std::vector<Col> span;
    for (const auto& b : images)
        if (!solve(span, b, F)) span.push_back(b);
    std::size_t nb = span.size();
    std::vector<Col> reps;
    for (const auto& z : cycles)
        if (!solve(span, z, F)) {
            span.push_back(z);
            reps.push_back(z);
        }
    UnitalityReport rep;
    if (reps.empty()) {
        rep.has_unit_class = rep.cohomologically_unital = true;
        rep.detail = "H(A, m1) = 0";
        return rep;
    }
    auto coords = [&](const Col& z) {
        auto c = solve(span, z, F);
        if (!c) throw std::logic_error("cohomological unit: product of cycles is not a cycle");
        return Col(c->begin() + nb, c->end());
    };
    // Unknown unit class u = sum c_k reps_k in degree 0; need [m2(u, h)] = [h] = [m2(h, u)].
    std::vector<std::size_t> deg0;
    for (std::size_t k = 0; k < reps.size(); ++k) {
        int deg = 0;
        bool found = false;
        for (std::size_t i = 0; i < n; ++i)
            if (reps[k][i]) {
                deg = a.degree(static_cast<Elem>(i));
                found = true;
                break;
            }
        if (found && (a.grading() == Grading::Z ? deg == 0 : deg % 2 == 0)) deg0.push_back(k);
    }
    std::size_t h = reps.size();
    std::vector<Col> system(deg0.size(), Col(2 * h * h, 0));
    Col target(2 * h * h, 0);
    for (std::size_t j = 0; j < h; ++j) {
        target[j * h + j] = 1;
        target[h * h + j * h + j] = 1;
    }
    for (std::size_t u = 0; u < deg0.size(); ++u) {
        for (std::size_t j = 0; j < h; ++j) {
            auto left = coords(m2(reps[deg0[u]], reps[j]));
            auto right = coords(m2(reps[j], reps[deg0[u]]));
            for (std::size_t i = 0; i < h; ++i) {
                system[u][j * h + i] = left[i];
                system[u][h * h + j * h + i] = right[i];
            }
        }
    }
    auto sol = deg0.empty() ? std::nullopt : solve(system, target, F);
    rep.has_unit_class = sol.has_value();
    rep.cohomologically_unital = sol.has_value();
    rep.detail = "dim H(A, m1) = " + std::to_string(h) + (sol ? ", unit class found" : ", no unit class");
    return rep;
}

namespace {

AInfAlgebra make_ground_field(std::uint32_t p) {
    AInfAlgebra::Builder b(PrimeField(p), {{"e", 0}});
    b.unit("e").mu({"e", "e"}, "e", 1);
    return b.build();
}

AInfAlgebra make_truncated(std::uint32_t p, int m, int xdeg) {
    if (m < 2) throw std::invalid_argument("truncated_poly: need m >= 2");
    std::vector<BasisElement> basis;
    for (int i = 0; i < m; ++i) basis.push_back({i == 0 ? "1" : (i == 1 ? "x" : "x^" + std::to_string(i)), i * xdeg});
    AInfAlgebra::Builder b(PrimeField(p), basis);
    b.unit("1");
    for (int i = 0; i < m; ++i)
        for (int j = 0; i + j < m; ++j) b.mu(std::vector<Elem>{static_cast<Elem>(i), static_cast<Elem>(j)}, static_cast<Elem>(i + j), 1u);
    return b.build();
}

AInfAlgebra make_exterior(std::uint32_t p, int k, int xdeg) {
    if (k < 1 || k > 6) throw std::invalid_argument("exterior: need 1 <= generators <= 6");
    if (xdeg % 2 == 0) throw std::invalid_argument("exterior: generator degree must be odd");
    std::vector<BasisElement> basis;
    for (int s = 0; s < (1 << k); ++s) {
        std::string name = s == 0 ? "1" : "";
        for (int i = 0; i < k; ++i)
            if (s & (1 << i)) name += "y" + std::to_string(i + 1);
        basis.push_back({name, __builtin_popcount(s) * xdeg});
    }
    AInfAlgebra::Builder b(PrimeField(p), basis);
    b.unit("1");
    for (int s = 0; s < (1 << k); ++s)
        for (int t = 0; t < (1 << k); ++t) {
            if (s & t) continue;
            // Sign of sorting the concatenated odd generators.
            int inversions = 0;
            for (int i = 0; i < k; ++i)
                if (t & (1 << i)) inversions += __builtin_popcount(s & ~((2 << i) - 1));
            b.mu(std::vector<Elem>{static_cast<Elem>(s), static_cast<Elem>(t)}, static_cast<Elem>(s | t),
                 PrimeField(p).sign(inversions));
        }
    return b.build();
}

}  // namespace

AInfAlgebra builtin_algebra(const BuiltinSpec& spec) {
    const auto& n = spec.name;
    if (n == "ground_field") return make_ground_field(spec.p);
    if (n == "dual_numbers") return make_truncated(spec.p, 2, spec.x_degree);
    if (n == "truncated_poly") return make_truncated(spec.p, spec.m, spec.x_degree);
    if (n == "exterior") return make_exterior(spec.p, spec.generators, spec.x_degree == 0 ? 1 : spec.x_degree);
    if (n == "zero_multiplication") {
        std::vector<int> degs = spec.degrees;
        if (degs.empty()) degs.assign(std::max(spec.generators, 1), 1);
        if (spec.generators > 0 && !spec.degrees.empty() && static_cast<int>(degs.size()) != spec.generators)
            throw std::invalid_argument("zero_multiplication: degree list length differs from generator count");
        std::vector<BasisElement> basis;
        for (std::size_t i = 0; i < degs.size(); ++i) basis.push_back({"g" + std::to_string(i + 1), degs[i]});
        return AInfAlgebra::Builder(PrimeField(spec.p), basis).build();
    }
    if (n == "mu3_witness") {
        AInfAlgebra::Builder b(PrimeField(spec.p), {{"a", 0}, {"b", -1}});
        b.mu({"a", "a", "a"}, "b", 1);
        return b.build();
    }
    throw std::invalid_argument("unknown builtin algebra: " + n);
}

AInfAlgebra strict_unitalization(const AInfAlgebra& a) {
    if (a.unit()) throw std::invalid_argument("strict_unitalization: the algebra already has a unit");
    std::vector<BasisElement> basis = a.basis();
    std::string name = a.index_of("1") ? "1+" : "1";
    basis.push_back({name, 0});
    auto one = static_cast<Elem>(basis.size() - 1);
    AInfAlgebra::Builder b(a.field(), basis, a.grading(), a.arity_bound());
    for (const auto& e : a.entries()) b.mu(e.inputs, e.output, e.coeff);
    b.unit(name);
    for (Elem x = 0; x < one; ++x) {
        b.mu(std::vector<Elem>{one, x}, x, 1);
        b.mu(std::vector<Elem>{x, one}, x, 1);
    }
    b.mu(std::vector<Elem>{one, one}, one, 1);
    return b.build();
}

std::vector<std::string> builtin_names() {
    return {"ground_field", "zero_multiplication", "dual_numbers", "truncated_poly", "exterior", "mu3_witness"};
}

AInfAlgebra algebra_from_json(const std::string& text) {
    using nlohmann::json;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("algebra file: ") + e.what());
    }
    try {
        auto p = j.at("p").get<std::uint32_t>();
        Grading g = Grading::Z;
        if (j.contains("grading")) {
            auto gs = j.at("grading").get<std::string>();
            if (gs == "Z2") g = Grading::Z2;
            else if (gs != "Z") throw std::invalid_argument("algebra file: grading must be Z or Z2");
        }
        std::vector<BasisElement> basis;
        for (const auto& b : j.at("basis")) basis.push_back({b.at("name").get<std::string>(), b.at("degree").get<int>()});
        int bound = 6;
        for (const auto& m : j.value("mu", json::array())) bound = std::max<int>(bound, m.at("inputs").size());
        AInfAlgebra::Builder builder(PrimeField(p), basis, g, bound);
        if (j.contains("unit") && !j.at("unit").is_null()) builder.unit(j.at("unit").get<std::string>());
        for (const auto& m : j.value("mu", json::array()))
            builder.mu(m.at("inputs").get<std::vector<std::string>>(), m.at("output").get<std::string>(),
                       m.at("coeff").get<std::int64_t>());
        return builder.build();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("algebra file: ") + e.what());
    }
}

std::string algebra_to_json(const AInfAlgebra& a) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["p"] = a.field().p();
    j["grading"] = a.grading() == Grading::Z ? "Z" : "Z2";
    j["basis"] = ordered_json::array();
    for (const auto& b : a.basis()) j["basis"].push_back({{"name", b.name}, {"degree", b.degree}});
    j["unit"] = a.unit() ? ordered_json(a.name(*a.unit())) : ordered_json(nullptr);
    j["mu"] = ordered_json::array();
    for (const auto& e : a.entries()) {
        std::vector<std::string> in;
        for (Elem x : e.inputs) in.push_back(a.name(x));
        j["mu"].push_back({{"inputs", in}, {"output", a.name(e.output)}, {"coeff", a.field().lift(e.coeff)}});
    }
    return j.dump(2);
}

}  // namespace cychom
