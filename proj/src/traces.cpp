#include "bcpnn/traces.hpp"

#include "bcpnn/parallel.hpp"

namespace bcpnn {

ProbabilityTraces ProbabilityTraces::uniform_init(LayerSpec s, LayerSpec t) {
    ProbabilityTraces tr(s, t);
    double us = 1.0 / s.mc_per_hc;
    double ut = 1.0 / t.mc_per_hc;
    for (auto& v : tr.p_src) v = us;
    for (auto& v : tr.p_tgt) v = ut;
    tr.set_joint_to_outer_product();
    return tr;
}

ProbabilityTraces ProbabilityTraces::noisy_init(LayerSpec s, LayerSpec t, Rng& rng, double noise) {
    ProbabilityTraces tr(s, t);
    double us = 1.0 / s.mc_per_hc;
    for (auto& v : tr.p_src) v = us;
    double ut = 1.0 / t.mc_per_hc;
    for (uint32_t j = 0; j < t.n_hc; ++j) {
        double sum = 0.0;
        size_t base = size_t(j) * t.mc_per_hc;
        for (uint32_t b = 0; b < t.mc_per_hc; ++b) {
            double v = ut * (1.0 + rng.uniform(-noise, noise));
            tr.p_tgt[base + b] = v;
            sum += v;
        }
        for (uint32_t b = 0; b < t.mc_per_hc; ++b) tr.p_tgt[base + b] /= sum;
    }
    tr.set_joint_to_outer_product();
    return tr;
}

void ProbabilityTraces::set_joint_to_outer_product() {
    const uint32_t m_src = src.mc_per_hc, m_tgt = tgt.mc_per_hc;
    for (uint32_t i = 0; i < src.n_hc; ++i) {
        for (uint32_t j = 0; j < tgt.n_hc; ++j) {
            double* blk = p_joint.data() + block(i, j);
            const double* ps = p_src.data() + size_t(i) * m_src;
            const double* pt = p_tgt.data() + size_t(j) * m_tgt;
            for (uint32_t a = 0; a < m_src; ++a)
                for (uint32_t b = 0; b < m_tgt; ++b)
                    blk[size_t(a) * m_tgt + b] = ps[a] * pt[b];
        }
    }
}

void update_traces(ProbabilityTraces& traces, const Activity& src_act, const Activity& tgt_act,
                   double dt, int threads) {
    if (src_act.layer != traces.src || tgt_act.layer != traces.tgt)
        throw DimensionError("update_traces: activity layout does not match traces");

    const double c = traces.k_p * dt / traces.tau_p;
    if (c == 0.0) return;
    const double keep = 1.0 - c;

    const size_t n_src_units = traces.p_src.size();
    for (size_t u = 0; u < n_src_units; ++u)
        traces.p_src[u] = keep * traces.p_src[u] + c * src_act.values[u];
    const size_t n_tgt_units = traces.p_tgt.size();
    for (size_t u = 0; u < n_tgt_units; ++u)
        traces.p_tgt[u] = keep * traces.p_tgt[u] + c * tgt_act.values[u];

    const uint32_t n_src = traces.src.n_hc, n_tgt = traces.tgt.n_hc;
    const uint32_t m_src = traces.src.mc_per_hc, m_tgt = traces.tgt.mc_per_hc;
    const double* sv = src_act.values.data();
    const double* tv = tgt_act.values.data();
    double* pj = traces.p_joint.data();

    // Blocks are disjoint per target HC, safe to fan out over j.
    parallel_for(n_tgt, threads, [&](size_t j0, size_t j1) {
        for (uint32_t i = 0; i < n_src; ++i) {
            for (size_t j = j0; j < j1; ++j) {
                double* blk = pj + traces.block(i, uint32_t(j));
                const double* tb = tv + j * m_tgt;
                for (uint32_t a = 0; a < m_src; ++a) {
                    const double drive = c * sv[size_t(i) * m_src + a];
                    double* row = blk + size_t(a) * m_tgt;
                    for (uint32_t b = 0; b < m_tgt; ++b)
                        row[b] = keep * row[b] + drive * tb[b];
                }
            }
        }
    });
}

} // namespace bcpnn
