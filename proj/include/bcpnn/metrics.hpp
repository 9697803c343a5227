#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bcpnn/projection.hpp"

namespace bcpnn {

// -sum p ln p in nats; 0 ln 0 = 0.
double entropy_nats(std::span<const double> probs);

// Marginal entropy H(p(Z_j)) per target HC, from the projection's target
// traces.
std::vector<double> marginal_entropies(const ProbabilityTraces& traces);

struct Histogram {
    double lo = 0.0, hi = 1.0;
    std::vector<uint64_t> counts;

    Histogram(double lo_, double hi_, size_t bins) : lo(lo_), hi(hi_), counts(bins, 0) {}
    void add(double v);
    std::string to_csv() const; // bin_lo,bin_hi,count
};

// Deterministic CSV: fixed header, values via shortest round-trip doubles.
class CsvWriter {
public:
    CsvWriter() = default;
    explicit CsvWriter(std::string header) { row(header); }
    void row(const std::string& line) {
        buf_ += line;
        buf_ += "\n";
    }
    // Appends another writer's rows, dropping its header line.
    void append_rows(const CsvWriter& other) {
        const std::string& t = other.buf_;
        size_t nl = t.find('\n');
        if (nl != std::string::npos && nl + 1 < t.size()) buf_.append(t, nl + 1, std::string::npos);
    }
    const std::string& text() const { return buf_; }
    void write_file(const std::string& path) const;

private:
    std::string buf_;
};

std::string csv_double(double v); // shortest representation that round-trips

} // namespace bcpnn
