#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bcpnn/layer.hpp"

namespace bcpnn {

// Images are kept as raw bytes; intensity accessors divide by 255, so
// re-serializing a loaded file reproduces it byte for byte.
struct Dataset {
    uint32_t rows = 0;
    uint32_t cols = 0;
    std::vector<uint8_t> pixels; // size() * rows * cols, row-major
    std::vector<uint8_t> labels; // class index per sample

    size_t size() const { return labels.size(); }
    uint32_t pixels_per_image() const { return rows * cols; }

    std::span<const uint8_t> image(size_t n) const {
        return std::span<const uint8_t>(pixels).subspan(n * pixels_per_image(), pixels_per_image());
    }

    // Intensities in [0, 1] for one sample; out.size() must equal
    // pixels_per_image().
    void intensities(size_t n, std::span<double> out) const;
};

// IDX pair loader (big-endian headers, magic 0x00000803 / 0x00000801).
// Files starting with the gzip magic are inflated transparently.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

// Exact inverse of load_idx for uncompressed files.
void write_idx(const Dataset& data, const std::string& images_path, const std::string& labels_path);

// Raw IDX payloads, for byte-exactness checks and fixtures.
std::vector<uint8_t> serialize_idx_images(const Dataset& data);
std::vector<uint8_t> serialize_idx_labels(const Dataset& data);

// One binary HC per pixel with activities (v, 1 - v); the per-HC sum is 1
// by construction.
Activity encode_sample(std::span<const double> intensities);

inline LayerSpec input_layer_for(const Dataset& d) { return LayerSpec{d.pixels_per_image(), 2}; }

struct DatasetSplit {
    std::vector<uint32_t> train;
    std::vector<uint32_t> validation;
};

// Seeded permutation split into disjoint train/validation index sets.
DatasetSplit split_dataset(const Dataset& data, uint32_t n_train, uint32_t n_val, uint64_t seed);

// Locate the four standard files under a directory, each optionally with a
// .gz suffix: train-images-idx3-ubyte, train-labels-idx1-ubyte,
// t10k-images-idx3-ubyte, t10k-labels-idx1-ubyte.
struct MnistDir {
    Dataset train;
    Dataset test;
};
MnistDir load_mnist_dir(const std::string& dir);

} // namespace bcpnn
