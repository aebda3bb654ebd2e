#pragma once

#include <cstdint>
#include <random>

#include "spr/bases.hpp"

namespace spr {

/// Independent stream for trial `index` of experiment stream `stream`, so that
/// trial results do not depend on scheduling or on how many trials run.
std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Rotation-invariant Gaussian vector normalized to the unit sphere; the
/// imaginary parts are zero for the real field.
CoefVec random_unit_coeffs(std::mt19937_64& rng, std::size_t m, Field field);

}  // namespace spr
