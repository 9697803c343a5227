#include "bcpnn/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "bcpnn/errors.hpp"

namespace bcpnn {

double entropy_nats(std::span<const double> probs) {
    double h = 0.0;
    for (double p : probs)
        if (p > 0.0) h -= p * std::log(p);
    return h;
}

std::vector<double> marginal_entropies(const ProbabilityTraces& traces) {
    std::vector<double> out(traces.tgt.n_hc);
    for (uint32_t j = 0; j < traces.tgt.n_hc; ++j) {
        std::span<const double> hc(traces.p_tgt.data() + size_t(j) * traces.tgt.mc_per_hc,
                                   traces.tgt.mc_per_hc);
        out[j] = entropy_nats(hc);
    }
    return out;
}

void Histogram::add(double v) {
    if (counts.empty()) return;
    double t = (v - lo) / (hi - lo);
    long bin = long(t * double(counts.size()));
    if (bin < 0) bin = 0;
    if (bin >= long(counts.size())) bin = long(counts.size()) - 1;
    counts[size_t(bin)] += 1;
}

std::string Histogram::to_csv() const {
    std::string out = "bin_lo,bin_hi,count\n";
    const double width = (hi - lo) / double(counts.size());
    for (size_t k = 0; k < counts.size(); ++k) {
        out += csv_double(lo + width * double(k));
        out += ",";
        out += csv_double(lo + width * double(k + 1));
        out += ",";
        out += std::to_string(counts[k]);
        out += "\n";
    }
    return out;
}

void CsvWriter::write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out.write(buf_.data(), std::streamsize(buf_.size()));
}

std::string csv_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

} // namespace bcpnn
