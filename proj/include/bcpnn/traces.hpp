#pragma once

#include <cstdint>
#include <vector>

#include "bcpnn/layer.hpp"
#include "bcpnn/rng.hpp"

namespace bcpnn {

// Exponentially averaged probability estimates for one projection:
// unary traces per source and target MC, and a pairwise trace for every
// (source HC, target HC, source MC, target MC) tuple. All three relax
// toward the current activation products with rate k_p * dt / tau_p, so
// the joint's marginals track the unary traces exactly.
struct ProbabilityTraces {
    LayerSpec src;
    LayerSpec tgt;
    double tau_p = 1.0;
    double k_p = 1.0; // 1 while learning, 0 frozen

    std::vector<double> p_src;   // [src hc * m_src + a]
    std::vector<double> p_tgt;   // [tgt hc * m_tgt + b]
    std::vector<double> p_joint; // [((i * n_tgt + j) * m_src + a) * m_tgt + b]

    ProbabilityTraces() = default;
    ProbabilityTraces(LayerSpec s, LayerSpec t)
        : src(s), tgt(t),
          p_src(s.units(), 0.0),
          p_tgt(t.units(), 0.0),
          p_joint(joint_size(s, t), 0.0) {}

    static size_t joint_size(LayerSpec s, LayerSpec t) {
        return size_t(s.n_hc) * t.n_hc * s.mc_per_hc * t.mc_per_hc;
    }

    // Offset of the (i, j) block; entries run a-major, b contiguous.
    size_t block(uint32_t i, uint32_t j) const {
        return (size_t(i) * tgt.n_hc + j) * src.mc_per_hc * tgt.mc_per_hc;
    }

    size_t joint_index(uint32_t i, uint32_t j, uint32_t a, uint32_t b) const {
        return block(i, j) + size_t(a) * tgt.mc_per_hc + b;
    }

    // Uniform marginals, joint = outer product.
    static ProbabilityTraces uniform_init(LayerSpec s, LayerSpec t);

    // Target marginals get per-MC noise (1 + eta), eta ~ U(-noise, noise),
    // renormalized per HC; source stays uniform and the joint is the outer
    // product, so marginal consistency holds exactly at t = 0.
    static ProbabilityTraces noisy_init(LayerSpec s, LayerSpec t, Rng& rng, double noise = 0.01);

    void set_joint_to_outer_product();
};

// One forward-Euler step of the trace ODEs:
//   p        += (k_p*dt/tau_p) (pi        - p)        for both unary traces
//   p_joint  += (k_p*dt/tau_p) (pi_src pi_tgt - p_joint)
// Requires k_p*dt/tau_p <= 1; callers validate that once at startup.
void update_traces(ProbabilityTraces& traces, const Activity& src_act, const Activity& tgt_act,
                   double dt, int threads = 1);

} // namespace bcpnn
