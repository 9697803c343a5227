#include "bcpnn/model.hpp"

namespace bcpnn {

Model Model::init(const TrainConfig& cfg, LayerSpec input_layer) {
    validate(cfg);
    input_layer.validate("input layer");

    Model m;
    m.cfg = cfg;
    m.input = input_layer;
    m.hidden = LayerSpec{cfg.hidden_hcs, cfg.hidden_mcs};
    m.hidden.validate("hidden layer");

    m.rng = Rng::stream(cfg.seed, 1);
    m.ih = Projection(m.input, m.hidden, +1.0);

    std::vector<uint32_t> degrees = init_mask_random(m.ih, cfg.p_mask, m.rng);
    m.structural.in_degree = std::move(degrees);
    m.structural.n_flips = cfg.n_flips;
    m.structural.flip_interval = cfg.flip_interval;

    m.ih.traces = ProbabilityTraces::noisy_init(m.input, m.hidden, m.rng);
    // With zero unsupervised epochs the time constants are never used; keep
    // them positive so a frozen model stays well-formed.
    m.ih.traces.tau_p = cfg.n_epochs_unsup > 0 ? cfg.tau_p_unsup() : 1.0;
    m.ih.traces.k_p = 1.0;

    m.regulator = BiasRegulator(m.hidden, cfg.k_half,
                                cfg.n_epochs_unsup > 0 ? cfg.tau_k_unsup() : 1.0);
    m.ih.bias_gain = m.regulator.k_beta;
    return m;
}

} // namespace bcpnn
