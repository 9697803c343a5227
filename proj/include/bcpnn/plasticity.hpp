#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bcpnn/projection.hpp"
#include "bcpnn/rng.hpp"

namespace bcpnn {

// Homeostatic regulation of the per-MC bias gain. Underused minicolumns
// (marginal trace below p_maxent = 1/N_MC) get a strongly negative gain,
// which turns their large negative log-bias into a large positive support
// and pushes them to win more often; well-used ones sit near gain 1.
struct BiasRegulator {
    double k_half = -100.0;  // gain value at p = p_maxent / 2
    double tau_k = 1.0;      // relaxation time constant
    double p_maxent = 0.0;   // 1 / mc_per_hc of the regulated layer
    double eps_den = 0.0;    // denominator guard, p_maxent / 100

    std::vector<double> k_beta; // current gain per regulated MC

    BiasRegulator() = default;
    BiasRegulator(LayerSpec regulated, double k_half_, double tau_k_)
        : k_half(k_half_), tau_k(tau_k_),
          p_maxent(1.0 / regulated.mc_per_hc),
          eps_den(p_maxent / 100.0),
          k_beta(regulated.units(), 1.0) {}

    double gain_floor() const { return 4.0 * k_half; }
};

// Target gain curve:
//   g(p) = 1 + (k_half - 1) (p_maxent/4)^2 / max((p - p_maxent/4)^2, eps_den^2)
// clamped to [g_floor, 1]. g(p_maxent/2) = k_half exactly and g -> 1 as
// p -> 1. eps_den bounds the pole at p = p_maxent/4.
double bias_gain_target(double p, double k_half, double p_maxent, double eps_den, double g_floor);

// First-order relaxation k_beta += (dt/tau_k) (g(p) - k_beta), then clamp.
void update_bias_gain(BiasRegulator& reg, std::span<const double> p_tgt, double dt);

// Mutual information per (source HC, target HC) pair, computed from the
// traces with the k_w = 1 weight formula and the same probability floor as
// parameter synchronization:
//   I[i,j] = sum_{a,b} p_joint * log( max(p_joint,eps) / (max(p_src,eps) max(p_tgt,eps)) )
// Silent pairs are included; flips need their scores.
std::vector<double> mutual_information(const Projection& proj, double eps, int threads = 1);

// Row-normalized MI: divide row i by (1 + number of active outgoing
// connections of source HC i).
std::vector<double> normalized_mi(std::span<const double> mi, std::span<const uint8_t> mask,
                                  uint32_t n_src_hc, uint32_t n_tgt_hc);

// Fixed in-degree rewiring state for one projection.
struct StructuralState {
    std::vector<uint32_t> in_degree; // per target HC, fixed after init
    uint32_t n_flips = 16;           // flips attempted per HC per rewiring event
    uint32_t flip_interval = 100;    // sample presentations between events
};

struct FlipRecord {
    uint32_t hidden_hc;
    uint32_t removed_src;
    uint32_t added_src;
    double ihat_removed;
    double ihat_added;
};

// Greedy rewiring. For each target HC, up to n_flips times: remove the
// active connection with the lowest normalized MI and add the inactive one
// with the highest, but only if that strictly improves. Denominators (the
// source out-degrees) are refreshed after every executed flip. In-degrees
// are preserved exactly.
std::vector<FlipRecord> flip_connections(Projection& proj, const StructuralState& state,
                                         std::span<const double> i_hat);

// Bernoulli(p_mask) mask; any target HC that draws zero incoming
// connections gets one uniformly random source. Returns the realized
// in-degrees, which become the fixed degrees of StructuralState.
std::vector<uint32_t> init_mask_random(Projection& proj, double p_mask, Rng& rng);

} // namespace bcpnn
