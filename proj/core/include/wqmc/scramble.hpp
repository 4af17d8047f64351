#pragma once

#include <cstdint>
#include <vector>

#include "wqmc/polynomial_lattice.hpp"
#include "wqmc/tensor_space.hpp"

namespace wqmc {

enum class Randomization { DigitalShift, OwenScramble };

// Randomized family over a base rule: realization(replicate) is a pure
// function of (seed, replicate).
struct RandomizedRuleFamily {
    QuadratureRule base;
    Randomization kind = Randomization::OwenScramble;
    int b = 2;  // digit base for scrambling
    std::uint64_t seed = 0;

    QuadratureRule realize(std::uint64_t replicate) const;
};

// Owen nested b-ary scrambling of every point: the permutation applied at
// digit depth l of coordinate j is drawn from a counter-based generator keyed
// by (seed, replicate, coordinate, digit prefix); truncated at 52/log2(b)
// digits.
std::vector<std::vector<double>> owen_scramble(
    const std::vector<std::vector<double>>& points, int b, std::uint64_t seed,
    std::uint64_t replicate);

// Component-wise addition modulo 1 of a seeded uniform shift.
std::vector<std::vector<double>> digital_shift(
    const std::vector<std::vector<double>>& points, std::uint64_t seed,
    std::uint64_t replicate);

// Sample RMSE and mean bias of Q(f) - I(f) over R realizations.
struct RandomizedError {
    double rmse;
    double bias;
};
RandomizedError randomized_error(const RandomizedRuleFamily& family,
                                 const ProductFunction& f,
                                 const ProductKernel& kernel, int replicates);

}  // namespace wqmc
