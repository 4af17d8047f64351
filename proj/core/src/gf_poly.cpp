#include "wqmc/gf_poly.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace wqmc {

namespace {

void check_base(int b) {
    if (b != 2 && b != 3) throw std::invalid_argument("gf poly: base must be 2 or 3");
}

}  // namespace

GFPoly::GFPoly(int base, std::uint64_t encoding) : base_(base), enc_(encoding) {
    check_base(base);
}

int GFPoly::degree() const {
    if (enc_ == 0) return -1;
    std::uint64_t v = enc_;
    int d = -1;
    while (v != 0) {
        v /= static_cast<std::uint64_t>(base_);
        ++d;
    }
    return d;
}

int GFPoly::coeff(int k) const {
    std::uint64_t v = enc_;
    for (int i = 0; i < k; ++i) v /= static_cast<std::uint64_t>(base_);
    return static_cast<int>(v % static_cast<std::uint64_t>(base_));
}

GFPoly GFPoly::monomial(int base, int degree) {
    check_base(base);
    std::uint64_t v = 1;
    for (int i = 0; i < degree; ++i) v *= static_cast<std::uint64_t>(base);
    return GFPoly(base, v);
}

GFPoly GFPoly::from_coeffs(int base, const std::vector<int>& coeffs) {
    check_base(base);
    std::uint64_t v = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        if (*it < 0 || *it >= base) throw std::invalid_argument("gf poly: bad coefficient");
        v = v * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(*it);
    }
    return GFPoly(base, v);
}

GFPoly GFPoly::operator+(const GFPoly& other) const {
    if (base_ != other.base_) throw std::invalid_argument("gf poly: base mismatch");
    if (base_ == 2) return GFPoly(2, enc_ ^ other.enc_);
    std::uint64_t a = enc_, b = other.enc_, out = 0, place = 1;
    while (a != 0 || b != 0) {
        out += place * ((a % 3 + b % 3) % 3);
        a /= 3;
        b /= 3;
        place *= 3;
    }
    return GFPoly(3, out);
}

GFPoly GFPoly::operator-(const GFPoly& other) const {
    if (base_ != other.base_) throw std::invalid_argument("gf poly: base mismatch");
    if (base_ == 2) return GFPoly(2, enc_ ^ other.enc_);
    std::uint64_t a = enc_, b = other.enc_, out = 0, place = 1;
    while (a != 0 || b != 0) {
        out += place * ((a % 3 + 3 - b % 3) % 3);
        a /= 3;
        b /= 3;
        place *= 3;
    }
    return GFPoly(3, out);
}

GFPoly GFPoly::operator*(const GFPoly& other) const {
    if (base_ != other.base_) throw std::invalid_argument("gf poly: base mismatch");
    int da = degree(), db = other.degree();
    if (da < 0 || db < 0) return zero(base_);
    if (da + db > 40) throw std::overflow_error("gf poly: product degree too large");
    GFPoly acc = zero(base_);
    for (int i = 0; i <= da; ++i) {
        int ci = coeff(i);
        if (ci == 0) continue;
        for (int j = 0; j <= db; ++j) {
            int cj = other.coeff(j);
            if (cj == 0) continue;
            int c = (ci * cj) % base_;
            // acc += c * z^{i+j}
            GFPoly term = monomial(base_, i + j);
            for (int rep = 0; rep < c; ++rep) acc = acc + term;
        }
    }
    return acc;
}

std::pair<GFPoly, GFPoly> GFPoly::divmod(const GFPoly& num, const GFPoly& den) {
    if (num.base_ != den.base_) throw std::invalid_argument("gf poly: base mismatch");
    if (den.is_zero()) throw std::invalid_argument("gf poly: division by zero");
    const int b = num.base_;
    GFPoly rem = num, quot = zero(b);
    int dd = den.degree();
    int lead = den.coeff(dd);
    // Inverse of the leading coefficient mod b (b prime, lead in {1, b-1}).
    int lead_inv = 1;
    for (int x = 1; x < b; ++x)
        if ((lead * x) % b == 1) lead_inv = x;
    while (rem.degree() >= dd) {
        int k = rem.degree() - dd;
        int c = (rem.coeff(rem.degree()) * lead_inv) % b;
        GFPoly t = zero(b);
        GFPoly mono = monomial(b, k);
        for (int rep = 0; rep < c; ++rep) t = t + mono;
        quot = quot + t;
        rem = rem - t * den;
    }
    return {quot, rem};
}

GFPoly GFPoly::operator%(const GFPoly& other) const {
    return divmod(*this, other).second;
}

bool is_irreducible(const GFPoly& p) {
    int d = p.degree();
    if (d <= 0) return false;
    if (d == 1) return true;
    // Trial division by all monic polynomials of degree <= d/2.  At the scales
    // used here (degree <= 20, base <= 3) this is at most ~3^10 candidates.
    const int b = p.base();
    for (int k = 1; 2 * k <= d; ++k) {
        std::uint64_t lo = 1, hi = 1;
        for (int i = 0; i < k; ++i) lo *= static_cast<std::uint64_t>(b);
        hi = lo * static_cast<std::uint64_t>(b);
        for (std::uint64_t e = lo; e < hi; ++e) {
            GFPoly cand(b, e);
            if ((p % cand).is_zero()) return false;
        }
    }
    return true;
}

GFPoly irreducible_poly(int base, int degree) {
    check_base(base);
    if (degree < 1 || degree > 24)
        throw std::invalid_argument("gf poly: irreducible degree out of range");
    static std::map<std::pair<int, int>, GFPoly> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({base, degree});
    if (it != cache.end()) return it->second;
    std::uint64_t lo = 1;
    for (int i = 0; i < degree; ++i) lo *= static_cast<std::uint64_t>(base);
    for (std::uint64_t e = lo; e < lo * static_cast<std::uint64_t>(base); ++e) {
        GFPoly cand(base, e);
        if (is_irreducible(cand)) {
            cache.emplace(std::make_pair(base, degree), cand);
            return cand;
        }
    }
    throw std::runtime_error("gf poly: no irreducible polynomial found");
}

}  // namespace wqmc
