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

// Equivariant homological algebra for Z/p inside the circle: k[Z/p]-complexes,
// k[tau, sigma]-complexes (sigma a degree -1 operator with d sigma + sigma d =
// tau - 1), their homotopy fixed points and orbits through the periodic
// resolutions, and the Gysin comparison maps between the Z/p and circle
// versions.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cychom/ainf.hpp"
#include "cychom/chain.hpp"
#include "cychom/series.hpp"

namespace cychom {

struct ZpComplex {
    ChainMap::Ptr complex;
    Operator tau;
    int p = 3;
};

struct TauSigmaComplex {
    ChainMap::Ptr complex;
    Operator tau;
    Operator sigma;  // degree -1
    int p = 3;

    ZpComplex restrict_to_zp() const { return {complex, tau, p}; }
};

// tau is a chain map and tau^p = 1; the field must have characteristic p.
CheckReport check_zp_complex(const ZpComplex& x);
// Additionally sigma^2 = 0, tau sigma = sigma tau and d sigma + sigma d = tau - 1.
CheckReport check_tau_sigma_complex(const TauSigmaComplex& x);

// k in degree 0 with tau = 1, sigma = 0.
TauSigmaComplex trivial_module(int p);
// Cellular chains of the circle with p vertices v_i (degree 0) and p edges e_i
// (degree -1): d e_i = v_{i+1} - v_i, tau shifts indices, sigma v_i = e_i.
TauSigmaComplex circle_model(int p);
// k[Z/p] in degree 0 with zero differential.
ZpComplex regular_representation(int p);
// X tensor V, with tau and sigma acting on the first factor.
TauSigmaComplex tensor_with(const TauSigmaComplex& x, const ChainComplex& v);
// Cone of a random module map between sums of shifted circle models and
// trivial modules, in a random basis. At most max_dim basis elements.
TauSigmaComplex random_tau_sigma_complex(int p, std::mt19937_64& rng, std::size_t max_dim = 12);

// A map of k[tau, sigma]-complexes: a degree 0 chain map commuting with tau and sigma.
struct ModuleMorphism {
    TauSigmaComplex source, target;
    ChainMap map;
};
CheckReport check_module_morphism(const ModuleMorphism& f);
// a * id + b * tau on x.
ModuleMorphism polynomial_endomorphism(const TauSigmaComplex& x, Scalar a, Scalar b);
// x -> x + y and x + y -> y.
ModuleMorphism sum_inclusion(const TauSigmaComplex& x, const TauSigmaComplex& y);
ModuleMorphism sum_projection(const TauSigmaComplex& x, const TauSigmaComplex& y);

enum class Totalization {
    hofix_zp,  // X[t, theta]/t^{N+1}: x -> dx + (-1)^{|x|}(tau-1)x theta, x theta -> dx theta + (-1)^{|x|} N x t
    hofix_ts,  // X[t]/t^{N+1}: x -> dx + N sigma x t
    hoorb_zp,  // X[t~, theta~], t~-powers <= N: x t~^k -> dx t~^k + (-1)^{|x|} N x t~^{k-1} theta~,
               //   x t~^k theta~ -> dx t~^k theta~ + (-1)^{|x|}(tau-1)x t~^k
    hoorb_ts,  // X[t~], t~-powers <= N: x t~^k -> dx t~^k + N sigma x t~^{k-1}
};

std::string to_string(Totalization kind);
std::optional<Totalization> totalization_from_string(const std::string& s);

// For the ts kinds, theta_copy doubles the result into Y + Y theta (or
// theta~), the source and target of the Gysin maps. Throws
// std::invalid_argument for ts kinds on a ZpComplex.
SeriesComplex equivariant_totalization(const ZpComplex& x, Totalization kind, int N);
SeriesComplex equivariant_totalization(const TauSigmaComplex& x, Totalization kind, int N, bool theta_copy = false);
// The window assumes x itself is exact (not truncated): fixed points are
// trusted on [min, min + 2N], orbits on [max - 2N, max].
DegreeWindow totalization_window(const ChainComplex& x, Totalization kind, int N);

// f applied coefficientwise; both totalizations must be of the same kind and N.
ChainMap totalization_map(const SeriesComplex& source, const SeriesComplex& target, const ChainMap& f);

struct GysinMaps {
    SeriesComplex fixed_circle, fixed_zp;  // hofix-ts<1,theta>, hofix-zp
    SeriesComplex orbit_zp, orbit_circle;  // hoorb-zp, hoorb-ts<1,theta~>
    ChainMap phi;                          // fixed_circle -> fixed_zp
    ChainMap phi_tilde;                    // orbit_zp -> orbit_circle
    CheckReport phi_report, phi_tilde_report;
    bool ok() const { return phi_report.ok && phi_tilde_report.ok; }
};

// phi:       x -> x - (-1)^{|x|} sigma x theta,
//            x theta -> x theta - (-1)^{|x|} (tau-1)^{p-2} sigma x t
// phi_tilde: x t~^k -> x t~^k + (-1)^{|x|} (tau-1)^{p-2} sigma x t~^{k-1} theta~,
//            x t~^k theta~ -> x t~^k theta~ + (-1)^{|x|} sigma x t~^k
// Both are certified as chain maps and as quasi-isomorphisms.
GysinMaps gysin_maps(const TauSigmaComplex& x, int N);

// phi and phi_tilde commute with the coefficientwise maps induced by f.
CheckReport check_gysin_naturality(const ModuleMorphism& f, int N);

// The operators u (degree 2) and eta (degree 1) on hoorb-zp(X):
//   u(x t~^k) = x t~^{k-1},  u(x t~^k theta~) = x t~^{k-1} theta~,
//   eta(x t~^k) = (-1)^{|x|} (tau-1)^{p-2} x t~^{k-1} theta~,
//   eta(x t~^k theta~) = -(-1)^{|x|} x t~^k.
struct OrbitOperators {
    SeriesComplex complex;
    ChainMap u, eta;
};
OrbitOperators orbit_operators(const ZpComplex& x, int N);

struct Prop15Row {
    int degree = 0;
    std::size_t zp_dim = 0;
    std::size_t circle_dim = 0;        // H^n of the negative cyclic complex
    std::size_t circle_theta_dim = 0;  // H^{n-1}, the theta copy
    bool agree() const { return zp_dim == circle_dim + circle_theta_dim; }
};

struct Prop15Report {
    std::string algebra;
    int p = 3, L = 4, N = 3;
    bool cohomologically_unital = false;
    DegreeWindow window;  // common stable window
    std::vector<Prop15Row> rows;
    std::string note;

    bool all_agree() const;
    // Hypothesis holds, the window is nonempty and every row agrees.
    bool passed() const { return cohomologically_unital && !window.empty() && all_agree(); }
};

// Dimensions of H(CC^{Z/p}(A)) against H(CC^{S^1}(A)) + H(CC^{S^1}(A)) theta
// on the common stable window. Agreement is computed even when the hypothesis
// fails, but then it is not claimed.
Prop15Report prop15_report(const AInfAlgebra& a, int p, int L, int N);

}  // namespace cychom
