#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wqmc/gf_poly.hpp"

namespace wqmc {

enum class RuleKind {
    MonteCarlo,
    Plr,
    ShiftedPlr,
    ScrambledPlr,
    InterlacedScrambledPlr,
    Composite,
};

std::string to_string(RuleKind k);

// Equal-weight (or explicitly weighted) cubature rule on [0,1)^s.
struct QuadratureRule {
    int s = 1;
    std::vector<std::vector<double>> nodes;
    std::vector<double> weights;  // w_i; QMC rules use 1/n
    RuleKind kind = RuleKind::Plr;

    int n() const { return static_cast<int>(nodes.size()); }
    void validate() const;  // n >= 1, nodes in [0,1)^s, sizes consistent
    static QuadratureRule qmc(int s, std::vector<std::vector<double>> nodes,
                              RuleKind kind);
};

// Rank-1 polynomial lattice over GF(b): n = b^m points, coordinate j of point
// h given by the first m Laurent digits of h(z) q_j(z) / p(z).
struct PolynomialLattice {
    int b = 2;
    int m = 1;
    GFPoly modulus;               // degree m
    std::vector<GFPoly> q;        // generating vector, degree < m, size d
    int interlace_r = 1;          // output dimension s = d / interlace_r

    int d() const { return static_cast<int>(q.size()); }
    int out_dims() const { return d() / interlace_r; }
    std::uint64_t n() const {
        std::uint64_t v = 1;
        for (int i = 0; i < m; ++i) v *= static_cast<std::uint64_t>(b);
        return v;
    }
    void validate() const;
};

// Base-b digit expansions (most significant first), length `digits`.
std::vector<int> point_digits(const PolynomialLattice& L, std::uint64_t h, int dim_j);
double digits_to_unit(const std::vector<int>& digits, int b);

// All b^m points of the (possibly > s dimensional) lattice, pre-interlacing.
std::vector<std::vector<double>> plr_raw_points(const PolynomialLattice& L);

// Digit interlacing D_r: consecutive blocks of r coordinates collapse to one;
// truncated at 52 base-b digits.  r = 1 is the identity.
std::vector<double> interlace_point(const std::vector<double>& y, int r, int b);
std::vector<std::vector<double>> interlace(const std::vector<std::vector<double>>& pts,
                                           int r, int b);

// Interlaced point set of the lattice as a quadrature rule.
QuadratureRule plr_rule(const PolynomialLattice& L);

// Serialization used by the CLI: one polynomial per line as base-b digit
// strings (most significant digit first), preceded by a header line
// "b m modulus interlace_r".
std::string lattice_to_text(const PolynomialLattice& L);
PolynomialLattice lattice_from_text(const std::string& text);

}  // namespace wqmc
