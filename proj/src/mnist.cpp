#include "bcpnn/mnist.hpp"

#include <zlib.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "bcpnn/errors.hpp"
#include "bcpnn/rng.hpp"

namespace bcpnn {

namespace {

constexpr uint32_t kImagesMagic = 0x00000803;
constexpr uint32_t kLabelsMagic = 0x00000801;

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return bytes;
}

std::vector<uint8_t> gunzip(const std::vector<uint8_t>& in, const std::string& path) {
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 16) != Z_OK) throw DataError("zlib init failed for '" + path + "'");
    std::vector<uint8_t> out;
    out.reserve(in.size() * 4);
    std::vector<uint8_t> buf(1 << 16);
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = buf.data();
        zs.avail_out = static_cast<uInt>(buf.size());
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw DataError("corrupt gzip stream in '" + path + "'");
        }
        out.insert(out.end(), buf.data(), buf.data() + (buf.size() - zs.avail_out));
    }
    inflateEnd(&zs);
    return out;
}

std::vector<uint8_t> read_maybe_gzip(const std::string& path) {
    std::vector<uint8_t> bytes = read_file(path);
    if (bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b) return gunzip(bytes, path);
    return bytes;
}

uint32_t read_be32(const std::vector<uint8_t>& b, size_t off, const std::string& path) {
    if (off + 4 > b.size())
        throw DataError("'" + path + "': truncated header, need 4 bytes at offset " +
                        std::to_string(off));
    return (uint32_t(b[off]) << 24) | (uint32_t(b[off + 1]) << 16) |
           (uint32_t(b[off + 2]) << 8) | uint32_t(b[off + 3]);
}

void write_be32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(uint8_t(v >> 24));
    out.push_back(uint8_t(v >> 16));
    out.push_back(uint8_t(v >> 8));
    out.push_back(uint8_t(v));
}

std::string hex32(uint32_t v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "0x%08x", v);
    return buf;
}

} // namespace

void Dataset::intensities(size_t n, std::span<double> out) const {
    const auto img = image(n);
    if (out.size() != img.size()) throw DimensionError("intensities: buffer size mismatch");
    for (size_t p = 0; p < img.size(); ++p) out[p] = img[p] / 255.0;
}

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
    const std::vector<uint8_t> ib = read_maybe_gzip(images_path);
    const uint32_t im = read_be32(ib, 0, images_path);
    if (im != kImagesMagic)
        throw DataError("'" + images_path + "': bad magic " + hex32(im) + " at offset 0, expected " +
                        hex32(kImagesMagic) + " for an images file");
    const uint32_t n_images = read_be32(ib, 4, images_path);
    const uint32_t rows = read_be32(ib, 8, images_path);
    const uint32_t cols = read_be32(ib, 12, images_path);
    const size_t need = 16 + size_t(n_images) * rows * cols;
    if (ib.size() < need)
        throw DataError("'" + images_path + "': truncated payload, need " + std::to_string(need) +
                        " bytes but file has " + std::to_string(ib.size()) +
                        " (short at offset " + std::to_string(ib.size()) + ")");

    const std::vector<uint8_t> lb = read_maybe_gzip(labels_path);
    const uint32_t lm = read_be32(lb, 0, labels_path);
    if (lm != kLabelsMagic)
        throw DataError("'" + labels_path + "': bad magic " + hex32(lm) + " at offset 0, expected " +
                        hex32(kLabelsMagic) + " for a labels file");
    const uint32_t n_labels = read_be32(lb, 4, labels_path);
    if (lb.size() < 8 + size_t(n_labels))
        throw DataError("'" + labels_path + "': truncated payload, need " +
                        std::to_string(8 + size_t(n_labels)) + " bytes but file has " +
                        std::to_string(lb.size()) + " (short at offset " +
                        std::to_string(lb.size()) + ")");
    if (n_images != n_labels)
        throw DataError("count mismatch at offset 4: " + std::to_string(n_images) + " images in '" +
                        images_path + "' vs " + std::to_string(n_labels) + " labels in '" +
                        labels_path + "'");

    Dataset d;
    d.rows = rows;
    d.cols = cols;
    d.pixels.assign(ib.begin() + 16, ib.begin() + static_cast<ptrdiff_t>(need));
    d.labels.assign(lb.begin() + 8, lb.begin() + 8 + n_labels);
    return d;
}

std::vector<uint8_t> serialize_idx_images(const Dataset& data) {
    std::vector<uint8_t> out;
    out.reserve(16 + data.pixels.size());
    write_be32(out, kImagesMagic);
    write_be32(out, uint32_t(data.size()));
    write_be32(out, data.rows);
    write_be32(out, data.cols);
    out.insert(out.end(), data.pixels.begin(), data.pixels.end());
    return out;
}

std::vector<uint8_t> serialize_idx_labels(const Dataset& data) {
    std::vector<uint8_t> out;
    out.reserve(8 + data.labels.size());
    write_be32(out, kLabelsMagic);
    write_be32(out, uint32_t(data.size()));
    out.insert(out.end(), data.labels.begin(), data.labels.end());
    return out;
}

void write_idx(const Dataset& data, const std::string& images_path, const std::string& labels_path) {
    auto dump = [](const std::vector<uint8_t>& bytes, const std::string& path) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot write '" + path + "'");
        out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    };
    dump(serialize_idx_images(data), images_path);
    dump(serialize_idx_labels(data), labels_path);
}

Activity encode_sample(std::span<const double> intensities) {
    LayerSpec layer{uint32_t(intensities.size()), 2};
    Activity a(layer);
    for (size_t p = 0; p < intensities.size(); ++p) {
        const double v = intensities[p];
        if (!(v >= 0.0 && v <= 1.0))
            throw DataError("encode_sample: intensity " + std::to_string(v) + " at pixel " +
                            std::to_string(p) + " outside [0, 1]");
        a.values[2 * p] = v;
        a.values[2 * p + 1] = 1.0 - v;
    }
    return a;
}

DatasetSplit split_dataset(const Dataset& data, uint32_t n_train, uint32_t n_val, uint64_t seed) {
    if (size_t(n_train) + n_val > data.size())
        throw DataError("split: requested " + std::to_string(n_train) + " + " +
                        std::to_string(n_val) + " samples from a dataset of " +
                        std::to_string(data.size()));
    std::vector<uint32_t> perm(data.size());
    for (uint32_t k = 0; k < perm.size(); ++k) perm[k] = k;
    Rng rng = Rng::stream(seed, 0);
    rng.shuffle(perm);

    DatasetSplit s;
    s.train.assign(perm.begin(), perm.begin() + n_train);
    s.validation.assign(perm.begin() + n_train, perm.begin() + n_train + n_val);
    return s;
}

MnistDir load_mnist_dir(const std::string& dir) {
    auto find = [&dir](const std::string& name) -> std::string {
        namespace fs = std::filesystem;
        for (const char* suffix : {"", ".gz"}) {
            fs::path p = fs::path(dir) / (name + suffix);
            if (fs::exists(p)) return p.string();
        }
        throw DataError("missing '" + name + "' (or .gz) under '" + dir + "'");
    };
    MnistDir m;
    m.train = load_idx(find("train-images-idx3-ubyte"), find("train-labels-idx1-ubyte"));
    m.test = load_idx(find("t10k-images-idx3-ubyte"), find("t10k-labels-idx1-ubyte"));
    return m;
}

} // namespace bcpnn
