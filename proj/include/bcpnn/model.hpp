#pragma once

#include <optional>

#include "bcpnn/classifier.hpp"
#include "bcpnn/config.hpp"
#include "bcpnn/plasticity.hpp"
#include "bcpnn/projection.hpp"

namespace bcpnn {

// Complete trainable state: the input->hidden projection with its bias
// regulator and rewiring state, the optional read-out classifier, the
// training RNG, and progress counters. Everything here round-trips through
// a checkpoint.
struct Model {
    TrainConfig cfg;
    LayerSpec input;  // one binary HC per pixel
    LayerSpec hidden;
    LayerSpec output{1, 10};

    Projection ih; // k_w = +1
    BiasRegulator regulator;
    StructuralState structural;
    std::optional<GoNoGoClassifier> clf;

    Rng rng{0};
    uint32_t epochs_unsup_done = 0;
    uint32_t epochs_sup_done = 0;
    uint64_t samples_seen = 0; // unsupervised presentations, drives flip scheduling

    // Draw order from the model stream (seed, stream 1):
    //   1. mask Bernoulli(p_mask), source-major;
    //   2. one repair draw per hidden HC with zero in-degree, ascending;
    //   3. hidden target-trace noise, one draw per hidden MC in order;
    //   4. one Fisher-Yates shuffle per training epoch.
    static Model init(const TrainConfig& cfg, LayerSpec input_layer);

    // Applies the regulator's gains to the projection and refreshes active
    // weights; call before inference whenever traces may have moved.
    void sync_ih_active(int threads = 1) { ih.sync_parameters_active(cfg.eps_prob, threads); }
};

} // namespace bcpnn
