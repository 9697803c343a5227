#pragma once

#include <cstdint>

#include "bcpnn/mnist.hpp"

namespace bcpnn {

// Deterministic synthetic handwritten-digit stand-in: ten stroke-based
// digit shapes rendered at 28x28 with per-sample affine jitter, stroke
// width and intensity variation, and light pixel noise. Useful when the
// real MNIST files are not available; the output goes through the same
// IDX encode/load path as the real data.
Dataset synth_digits(uint32_t n_samples, uint64_t seed);

} // namespace bcpnn
