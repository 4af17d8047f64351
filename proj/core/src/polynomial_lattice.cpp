#include "wqmc/polynomial_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wqmc {

std::string to_string(RuleKind k) {
    switch (k) {
        case RuleKind::MonteCarlo: return "mc";
        case RuleKind::Plr: return "plr";
        case RuleKind::ShiftedPlr: return "shifted-plr";
        case RuleKind::ScrambledPlr: return "scrambled-plr";
        case RuleKind::InterlacedScrambledPlr: return "interlaced-scrambled-plr";
        case RuleKind::Composite: return "composite";
    }
    return "?";
}

void QuadratureRule::validate() const {
    if (nodes.empty()) throw std::invalid_argument("rule: needs at least one node");
    if (nodes.size() != weights.size())
        throw std::invalid_argument("rule: node/weight count mismatch");
    for (const auto& t : nodes) {
        if (static_cast<int>(t.size()) != s)
            throw std::invalid_argument("rule: node dimension mismatch");
        for (double x : t)
            if (!(x >= 0.0) || x >= 1.0)
                throw std::invalid_argument("rule: node outside [0,1)");
    }
}

QuadratureRule QuadratureRule::qmc(int s, std::vector<std::vector<double>> nodes,
                                   RuleKind kind) {
    QuadratureRule rule;
    rule.s = s;
    rule.weights.assign(nodes.size(), 1.0 / static_cast<double>(nodes.size()));
    rule.nodes = std::move(nodes);
    rule.kind = kind;
    rule.validate();
    return rule;
}

void PolynomialLattice::validate() const {
    if (b != 2 && b != 3) throw std::invalid_argument("lattice: base must be 2 or 3");
    if (m < 1 || m > 20) throw std::invalid_argument("lattice: m out of range");
    if (modulus.degree() != m) throw std::invalid_argument("lattice: modulus degree != m");
    if (q.empty()) throw std::invalid_argument("lattice: empty generating vector");
    if (interlace_r < 1) throw std::invalid_argument("lattice: interlace factor < 1");
    if (d() % interlace_r != 0)
        throw std::invalid_argument("lattice: dimension not divisible by interlace factor");
    for (const auto& qi : q) {
        if (qi.base() != b) throw std::invalid_argument("lattice: base mismatch in q");
        if (qi.degree() >= m) throw std::invalid_argument("lattice: deg q must be < m");
    }
}

namespace {

// First `count` Laurent digits of g(z)/p(z) with deg g < deg p = m.
std::vector<int> laurent_digits(const GFPoly& g, const GFPoly& p, int count) {
    const int b = p.base();
    const int m = p.degree();
    int lead = p.coeff(m);
    int lead_inv = 1;
    for (int x = 1; x < b; ++x)
        if ((lead * x) % b == 1) lead_inv = x;
    std::vector<int> out(static_cast<std::size_t>(count), 0);
    GFPoly rem = g;
    for (int l = 0; l < count; ++l) {
        // rem <- rem * z, then remove the degree-m term with a multiple of p.
        rem = rem * GFPoly::monomial(b, 1);
        int top = rem.degree() == m ? rem.coeff(m) : 0;
        int u = (top * lead_inv) % b;
        if (u != 0) {
            GFPoly t = GFPoly::zero(b);
            for (int rep = 0; rep < u; ++rep) t = t + p;
            rem = rem - t;
        }
        out[static_cast<std::size_t>(l)] = u;
    }
    return out;
}

GFPoly integer_poly(int b, std::uint64_t h) {
    // Digits of h base b are the coefficients, which is exactly the encoding
    // convention of GFPoly.
    return GFPoly(b, h);
}

}  // namespace

std::vector<int> point_digits(const PolynomialLattice& L, std::uint64_t h, int dim_j) {
    if (dim_j < 1 || dim_j > L.d())
        throw std::out_of_range("lattice: dimension index");
    GFPoly g = (integer_poly(L.b, h) * L.q[static_cast<std::size_t>(dim_j - 1)]) % L.modulus;
    return laurent_digits(g, L.modulus, L.m);
}

double digits_to_unit(const std::vector<int>& digits, int b) {
    double v = 0.0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it)
        v = (v + *it) / static_cast<double>(b);
    return v;
}

std::vector<std::vector<double>> plr_raw_points(const PolynomialLattice& L) {
    L.validate();
    std::vector<std::vector<double>> pts;
    pts.reserve(L.n());
    for (std::uint64_t h = 0; h < L.n(); ++h) {
        std::vector<double> t(static_cast<std::size_t>(L.d()));
        for (int j = 1; j <= L.d(); ++j)
            t[static_cast<std::size_t>(j - 1)] = digits_to_unit(point_digits(L, h, j), L.b);
        pts.push_back(std::move(t));
    }
    return pts;
}

std::vector<double> interlace_point(const std::vector<double>& y, int r, int b) {
    if (r < 1 || static_cast<int>(y.size()) % r != 0)
        throw std::invalid_argument("interlace: dimension not divisible by r");
    if (r == 1) return y;
    const int s = static_cast<int>(y.size()) / r;
    const int depth = b == 2 ? 52 : 32;  // digits representable exactly
    std::vector<double> out(static_cast<std::size_t>(s), 0.0);
    for (int block = 0; block < s; ++block) {
        double v = 0.0;
        // Output digit at position j + (i-1)r is digit i of component j.
        for (int j = 1; j <= r; ++j) {
            double x = y[static_cast<std::size_t>(block * r + j - 1)];
            double place = std::pow(static_cast<double>(b), -static_cast<double>(j));
            for (int i = 1; j + (i - 1) * r <= depth; ++i) {
                x *= b;
                int digit = static_cast<int>(std::floor(x));
                if (digit >= b) digit = b - 1;  // guard stray round-up
                x -= digit;
                v += digit * place * std::pow(static_cast<double>(b),
                                              -static_cast<double>((i - 1) * r));
            }
        }
        out[static_cast<std::size_t>(block)] = v;
    }
    return out;
}

std::vector<std::vector<double>> interlace(const std::vector<std::vector<double>>& pts,
                                           int r, int b) {
    std::vector<std::vector<double>> out;
    out.reserve(pts.size());
    for (const auto& y : pts) out.push_back(interlace_point(y, r, b));
    return out;
}

QuadratureRule plr_rule(const PolynomialLattice& L) {
    auto raw = plr_raw_points(L);
    auto pts = interlace(raw, L.interlace_r, L.b);
    return QuadratureRule::qmc(L.out_dims(), std::move(pts), RuleKind::Plr);
}

std::string lattice_to_text(const PolynomialLattice& L) {
    std::ostringstream os;
    auto digits = [&](const GFPoly& g) {
        std::string s;
        int d = std::max(0, g.degree());
        for (int k = d; k >= 0; --k) s += static_cast<char>('0' + g.coeff(k));
        return s;
    };
    os << L.b << ' ' << L.m << ' ' << digits(L.modulus) << ' ' << L.interlace_r << '\n';
    for (const auto& qi : L.q) os << digits(qi) << '\n';
    return os.str();
}

PolynomialLattice lattice_from_text(const std::string& text) {
    std::istringstream is(text);
    PolynomialLattice L;
    std::string mod;
    if (!(is >> L.b >> L.m >> mod >> L.interlace_r))
        throw std::invalid_argument("lattice: bad header line");
    auto parse = [&](const std::string& s) {
        std::vector<int> coeffs;  // most significant first in the text
        for (char c : s) {
            if (c < '0' || c >= '0' + L.b)
                throw std::invalid_argument("lattice: bad digit in polynomial");
            coeffs.push_back(c - '0');
        }
        std::reverse(coeffs.begin(), coeffs.end());
        return GFPoly::from_coeffs(L.b, coeffs);
    };
    L.modulus = parse(mod);
    std::string line;
    while (is >> line) L.q.push_back(parse(line));
    L.validate();
    return L;
}

}  // namespace wqmc
