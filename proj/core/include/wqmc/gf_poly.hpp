#pragma once

#include <cstdint>
#include <vector>

namespace wqmc {

// Polynomials over GF(b) for prime b in {2, 3}, encoded as an integer whose
// base-b digits are the coefficients (least significant digit = constant
// term).  Degree < 64 / log2(b) in practice; all ops stay well inside 64 bits
// for the m <= 20 range used here.
class GFPoly {
public:
    GFPoly() = default;
    GFPoly(int base, std::uint64_t encoding);

    int base() const { return base_; }
    std::uint64_t encoding() const { return enc_; }
    bool is_zero() const { return enc_ == 0; }
    int degree() const;  // -1 for the zero polynomial
    int coeff(int k) const;

    static GFPoly zero(int base) { return GFPoly(base, 0); }
    static GFPoly one(int base) { return GFPoly(base, 1); }
    static GFPoly monomial(int base, int degree);  // z^degree
    static GFPoly from_coeffs(int base, const std::vector<int>& coeffs);

    GFPoly operator+(const GFPoly& other) const;
    GFPoly operator-(const GFPoly& other) const;
    GFPoly operator*(const GFPoly& other) const;
    // Quotient and remainder; divisor must be nonzero.
    static std::pair<GFPoly, GFPoly> divmod(const GFPoly& num, const GFPoly& den);
    GFPoly operator%(const GFPoly& other) const;

    bool operator==(const GFPoly& other) const {
        return base_ == other.base_ && enc_ == other.enc_;
    }

private:
    int base_ = 2;
    std::uint64_t enc_ = 0;
};

bool is_irreducible(const GFPoly& p);

// Smallest-encoding irreducible polynomial of the given degree, cached.
GFPoly irreducible_poly(int base, int degree);

}  // namespace wqmc
