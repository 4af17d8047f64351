#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace wqmc {

// Product weight sequence gamma_1 >= gamma_2 >= ... > 0.  Three forms:
//   poly(p, scale):  gamma_j = scale * j^{-p}
//   geom(q, scale):  gamma_j = scale * q^j
//   list(...) with a tail rule taking over after the explicit entries.
// Subset weights are products: gamma_u = prod_{j in u} gamma_j,
// gamma_emptyset = 1.
class WeightSequence {
public:
    static WeightSequence poly(double p, double scale = 1.0);
    static WeightSequence geometric(double q, double scale = 1.0);
    static WeightSequence explicit_list(std::vector<double> head,
                                        WeightSequence tail);

    // Grammar: poly(p=3, scale=0.5) | geom(q=0.5, scale=1)
    //        | list(0.9,0.5,0.1; tail=poly(p=4))
    // Scale defaults to 1; parse errors throw std::invalid_argument.
    static WeightSequence parse(const std::string& text);
    std::string to_config_string() const;

    double weight(int j) const;  // gamma_j, 1-based
    double set_weight(std::span<const int> u) const;

    // Summability exponent: sup {q : sum gamma_j^{1/q} < inf} expressed as
    // the polynomial decay rate of gamma_j (infinite for geometric decay).
    double decay() const;

    // prod_{j<=s} (1 + gamma_j)^{1/2}; s < 0 means the limit s -> infinity,
    // evaluated to relative tolerance tol.
    double embedding_budget(int s, double tol = 1e-12) const;

    // Same sequence multiplied by a constant.
    WeightSequence scaled(double c) const;

    bool summable() const;  // sum gamma_j < inf

private:
    enum class Kind { Poly, Geom, Explicit };
    Kind kind_ = Kind::Poly;
    double p_ = 2.0;      // poly exponent
    double q_ = 0.5;      // geometric ratio
    double scale_ = 1.0;
    std::vector<double> head_;
    // tail rule for explicit lists (never Explicit itself)
    Kind tail_kind_ = Kind::Poly;
    double tail_p_ = 2.0, tail_q_ = 0.5, tail_scale_ = 1.0;

    void check() const;
};

}  // namespace wqmc
