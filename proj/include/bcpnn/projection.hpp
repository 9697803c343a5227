#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bcpnn/layer.hpp"
#include "bcpnn/traces.hpp"

namespace bcpnn {

// A feed-forward projection between two layers: an HC-level boolean mask,
// log-domain weights and biases derived from the probability traces, a
// weight gain k_w (+1 or -1), and a per-target-MC bias gain. Traces are
// kept for every (i, j) HC pair; the mask gates only support computation.
class Projection {
public:
    Projection() = default;
    Projection(LayerSpec src, LayerSpec tgt, double k_w)
        : traces(ProbabilityTraces::uniform_init(src, tgt)),
          bias_gain(tgt.units(), 1.0),
          weights(ProbabilityTraces::joint_size(src, tgt), 0.0),
          bias(tgt.units(), 0.0),
          src_(src), tgt_(tgt), k_w_(k_w),
          mask_(size_t(src.n_hc) * tgt.n_hc, uint8_t{1}) {
        src.validate("projection source");
        tgt.validate("projection target");
    }

    const LayerSpec& src() const { return src_; }
    const LayerSpec& tgt() const { return tgt_; }
    double k_w() const { return k_w_; }
    void set_k_w(double k) { k_w_ = k; }

    bool masked(uint32_t i, uint32_t j) const { return mask_[size_t(i) * tgt_.n_hc + j] != 0; }
    void set_mask(uint32_t i, uint32_t j, bool on) { mask_[size_t(i) * tgt_.n_hc + j] = on ? 1 : 0; }
    std::span<const uint8_t> mask() const { return mask_; }
    std::span<uint8_t> mask_mut() { return mask_; }

    // Active incoming connections per target HC.
    std::vector<uint32_t> in_degrees() const;
    // Active outgoing connections per source HC.
    std::vector<uint32_t> out_degrees() const;

    // Recompute weights and biases from the traces:
    //   w[(i,a),(j,b)] = k_w * log( max(p_joint, eps) / (max(p_src, eps) max(p_tgt, eps)) )
    //   bias[j,b]      = bias_gain[j,b] * log( max(p_tgt, eps) )
    void sync_parameters(double eps, int threads = 1);
    // Same, but only for blocks with mask 1. Sufficient for support
    // computation; silent weights are never read through the mask.
    void sync_parameters_active(double eps, int threads = 1);

    ProbabilityTraces traces;
    std::vector<double> bias_gain; // per target MC; the bias regulator owns these for the hidden layer
    std::vector<double> weights;   // joint layout, see ProbabilityTraces
    std::vector<double> bias;      // per target MC

private:
    void sync_blocks(double eps, bool active_only, int threads);

    LayerSpec src_, tgt_;
    double k_w_ = 1.0;
    std::vector<uint8_t> mask_; // [i * n_tgt_hc + j]
};

// Pure form of the parameter update; returns (weights, bias) without
// touching any projection state.
struct SyncedParameters {
    std::vector<double> weights;
    std::vector<double> bias;
};
SyncedParameters sync_parameters(const ProbabilityTraces& traces, double k_w,
                                 std::span<const double> k_beta, double eps);

// Softmax with gain gamma applied independently inside every HC, with
// max-subtraction. gamma = 0 gives the uniform distribution.
Activity softmax_normalize(const LayerSpec& layer, std::span<const double> support, double gamma);

// Total input per target MC: h[j,b] = bias[j,b] + sum over masked source
// HCs i and their MCs a of src[i,a] * w[(i,a),(j,b)].
std::vector<double> compute_support(const Activity& src_activity, const Projection& proj,
                                    int threads = 1);

// Eq-style posterior: softmax_normalize(compute_support(...), gamma).
Activity infer(const Activity& src_activity, const Projection& proj, double gamma,
               int threads = 1);

} // namespace bcpnn
