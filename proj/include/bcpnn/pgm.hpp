#pragma once

#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "bcpnn/errors.hpp"

namespace bcpnn {

// Minimal binary PGM (P5), maxval 255, single-line header.
inline std::vector<uint8_t> encode_pgm(uint32_t width, uint32_t height,
                                       std::span<const uint8_t> gray) {
    if (gray.size() != size_t(width) * height) throw DimensionError("encode_pgm: pixel count mismatch");
    std::string header = "P5 " + std::to_string(width) + " " + std::to_string(height) + " 255\n";
    std::vector<uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), gray.begin(), gray.end());
    return out;
}

inline void write_pgm(const std::string& path, uint32_t width, uint32_t height,
                      std::span<const uint8_t> gray) {
    const std::vector<uint8_t> bytes = encode_pgm(width, height, gray);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

} // namespace bcpnn
