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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cychom {

using Scalar = std::uint32_t;

// Arithmetic in F_p for an odd prime p < 2^16. Products fit in 32 bits, so
// reductions never need wider types.
class PrimeField {
public:
    explicit PrimeField(std::uint32_t p) : p_(p) {
        if (p < 3 || p >= (1u << 16)) throw std::invalid_argument("field: p must be an odd prime below 65536, got " + std::to_string(p));
        for (std::uint32_t q = 2; q * q <= p; ++q)
            if (p % q == 0) throw std::invalid_argument("field: " + std::to_string(p) + " is not prime");
    }

    std::uint32_t p() const noexcept { return p_; }

    Scalar add(Scalar a, Scalar b) const noexcept {
        Scalar s = a + b;
        return s - (p_ & (0u - static_cast<Scalar>(s >= p_)));
    }
    Scalar sub(Scalar a, Scalar b) const noexcept { return add(a, p_ - b); }
    Scalar neg(Scalar a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Scalar mul(Scalar a, Scalar b) const noexcept { return (a * b) % p_; }

    Scalar pow(Scalar a, std::uint64_t e) const noexcept {
        Scalar r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    Scalar inv(Scalar a) const {
        if (a == 0) throw std::domain_error("field: inverse of zero");
        return pow(a, p_ - 2);
    }

    Scalar from_int(std::int64_t v) const noexcept {
        auto r = v % static_cast<std::int64_t>(p_);
        return static_cast<Scalar>(r < 0 ? r + p_ : r);
    }
    // (-1)^e as a field element.
    Scalar sign(std::int64_t e) const noexcept { return (e & 1) ? p_ - 1 : 1; }
    // Balanced representative in (-p/2, p/2], handy for printing.
    std::int64_t lift(Scalar a) const noexcept { return a > p_ / 2 ? static_cast<std::int64_t>(a) - p_ : a; }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::uint32_t p_;
};

}  // namespace cychom
