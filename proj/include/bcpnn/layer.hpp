#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bcpnn/errors.hpp"

namespace bcpnn {

// A layer is a set of hypercolumns (HCs), each holding the same number of
// minicolumns (MCs). An HC represents one discrete variable; the MC
// activities within it form a probability distribution over its values.
struct LayerSpec {
    uint32_t n_hc = 0;
    uint32_t mc_per_hc = 0;

    uint32_t units() const { return n_hc * mc_per_hc; }

    void validate(const char* what = "layer") const {
        if (n_hc < 1 || mc_per_hc < 2)
            throw DimensionError(std::string(what) + ": need n_hc >= 1 and mc_per_hc >= 2, got " +
                                 std::to_string(n_hc) + "x" + std::to_string(mc_per_hc));
    }

    bool operator==(const LayerSpec&) const = default;
};

// Per-minicolumn probabilities, indexed (hc, mc). Within each HC the values
// sum to 1.
struct Activity {
    LayerSpec layer;
    std::vector<double> values;

    Activity() = default;
    explicit Activity(LayerSpec spec) : layer(spec), values(spec.units(), 0.0) {}

    double& at(uint32_t hc, uint32_t mc) { return values[size_t(hc) * layer.mc_per_hc + mc]; }
    double at(uint32_t hc, uint32_t mc) const { return values[size_t(hc) * layer.mc_per_hc + mc]; }

    std::span<const double> hc_span(uint32_t hc) const {
        return std::span<const double>(values).subspan(size_t(hc) * layer.mc_per_hc, layer.mc_per_hc);
    }

    static Activity uniform(LayerSpec spec) {
        Activity a(spec);
        double u = 1.0 / spec.mc_per_hc;
        for (auto& v : a.values) v = u;
        return a;
    }

    // One winning MC per HC.
    static Activity one_hot(LayerSpec spec, std::span<const uint32_t> winners) {
        if (winners.size() != spec.n_hc)
            throw DimensionError("one_hot: winner count " + std::to_string(winners.size()) +
                                 " != n_hc " + std::to_string(spec.n_hc));
        Activity a(spec);
        for (uint32_t i = 0; i < spec.n_hc; ++i) {
            if (winners[i] >= spec.mc_per_hc)
                throw DataError("one_hot: MC index " + std::to_string(winners[i]) +
                                " out of range for HC " + std::to_string(i));
            a.at(i, winners[i]) = 1.0;
        }
        return a;
    }

    static Activity one_hot(LayerSpec spec, uint32_t winner) {
        std::vector<uint32_t> w(spec.n_hc, winner);
        return one_hot(spec, w);
    }
};

} // namespace bcpnn
