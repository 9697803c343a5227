#include "bcpnn/plasticity.hpp"

#include <algorithm>
#include <cmath>

#include "bcpnn/parallel.hpp"

namespace bcpnn {

double bias_gain_target(double p, double k_half, double p_maxent, double eps_den, double g_floor) {
    const double quarter = 0.25 * p_maxent;
    const double d = p - quarter;
    const double den = std::max(d * d, eps_den * eps_den);
    // 1 + (k_half - 1) r written as a convex combination, so r = 1 (at
    // p = p_maxent/2, where d equals quarter bit-for-bit) returns k_half
    // exactly for any k_half.
    const double r = (quarter * quarter) / den;
    const double g = (1.0 - r) + k_half * r;
    return std::clamp(g, g_floor, 1.0);
}

void update_bias_gain(BiasRegulator& reg, std::span<const double> p_tgt, double dt) {
    if (p_tgt.size() != reg.k_beta.size())
        throw DimensionError("update_bias_gain: marginal count " + std::to_string(p_tgt.size()) +
                             " != regulated unit count " + std::to_string(reg.k_beta.size()));
    const double rate = dt / reg.tau_k;
    const double floor = reg.gain_floor();
    for (size_t u = 0; u < reg.k_beta.size(); ++u) {
        const double g = bias_gain_target(p_tgt[u], reg.k_half, reg.p_maxent, reg.eps_den, floor);
        const double k = reg.k_beta[u] + rate * (g - reg.k_beta[u]);
        reg.k_beta[u] = std::clamp(k, floor, 1.0);
    }
}

std::vector<double> mutual_information(const Projection& proj, double eps, int threads) {
    const ProbabilityTraces& tr = proj.traces;
    const uint32_t n_src = tr.src.n_hc, n_tgt = tr.tgt.n_hc;
    const uint32_t m_src = tr.src.mc_per_hc, m_tgt = tr.tgt.mc_per_hc;
    std::vector<double> mi(size_t(n_src) * n_tgt, 0.0);

    parallel_for(n_src, threads, [&](size_t i0, size_t i1) {
        std::vector<double> log_src(m_src);
        for (size_t i = i0; i < i1; ++i) {
            for (uint32_t a = 0; a < m_src; ++a) {
                double p = tr.p_src[i * m_src + a];
                log_src[a] = std::log(p < eps ? eps : p);
            }
            for (uint32_t j = 0; j < n_tgt; ++j) {
                const double* pj = tr.p_joint.data() + tr.block(uint32_t(i), j);
                const double* pt = tr.p_tgt.data() + size_t(j) * m_tgt;
                double acc = 0.0;
                for (uint32_t a = 0; a < m_src; ++a) {
                    const double* row = pj + size_t(a) * m_tgt;
                    for (uint32_t b = 0; b < m_tgt; ++b) {
                        const double p = row[b];
                        if (p == 0.0) continue;
                        const double lt = std::log(pt[b] < eps ? eps : pt[b]);
                        const double lj = std::log(p < eps ? eps : p);
                        acc += p * (lj - log_src[a] - lt);
                    }
                }
                mi[i * n_tgt + j] = acc;
            }
        }
    });
    return mi;
}

std::vector<double> normalized_mi(std::span<const double> mi, std::span<const uint8_t> mask,
                                  uint32_t n_src_hc, uint32_t n_tgt_hc) {
    if (mi.size() != size_t(n_src_hc) * n_tgt_hc || mask.size() != mi.size())
        throw DimensionError("normalized_mi: shape mismatch");
    std::vector<double> out(mi.size());
    for (uint32_t i = 0; i < n_src_hc; ++i) {
        uint32_t out_deg = 0;
        for (uint32_t j = 0; j < n_tgt_hc; ++j) out_deg += mask[size_t(i) * n_tgt_hc + j];
        const double inv = 1.0 / (1.0 + out_deg);
        for (uint32_t j = 0; j < n_tgt_hc; ++j)
            out[size_t(i) * n_tgt_hc + j] = mi[size_t(i) * n_tgt_hc + j] * inv;
    }
    return out;
}

std::vector<FlipRecord> flip_connections(Projection& proj, const StructuralState& state,
                                         std::span<const double> i_hat) {
    const uint32_t n_src = proj.src().n_hc, n_tgt = proj.tgt().n_hc;
    if (i_hat.size() != size_t(n_src) * n_tgt)
        throw DimensionError("flip_connections: normalized MI shape mismatch");
    if (state.in_degree.size() != n_tgt)
        throw DimensionError("flip_connections: in-degree count mismatch");

    std::vector<uint32_t> out_deg = proj.out_degrees();

    // Recover the raw MI so normalization can track the live out-degrees
    // as flips change them.
    std::vector<double> mi(i_hat.size());
    for (uint32_t i = 0; i < n_src; ++i) {
        const double den = 1.0 + out_deg[i];
        for (uint32_t j = 0; j < n_tgt; ++j)
            mi[size_t(i) * n_tgt + j] = i_hat[size_t(i) * n_tgt + j] * den;
    }
    auto ihat_live = [&](uint32_t i, uint32_t j) {
        return mi[size_t(i) * n_tgt + j] / (1.0 + out_deg[i]);
    };

    std::vector<FlipRecord> log;
    for (uint32_t j = 0; j < n_tgt; ++j) {
        for (uint32_t f = 0; f < state.n_flips; ++f) {
            bool have_worst = false, have_best = false;
            uint32_t worst_i = 0, best_i = 0;
            double worst = 0.0, best = 0.0;
            for (uint32_t i = 0; i < n_src; ++i) {
                const double v = ihat_live(i, j);
                if (proj.masked(i, j)) {
                    if (!have_worst || v < worst) { worst = v; worst_i = i; have_worst = true; }
                } else {
                    if (!have_best || v > best) { best = v; best_i = i; have_best = true; }
                }
            }
            if (!have_worst || !have_best || !(best > worst)) break;

            proj.set_mask(worst_i, j, false);
            proj.set_mask(best_i, j, true);
            out_deg[worst_i] -= 1;
            out_deg[best_i] += 1;
            log.push_back({j, worst_i, best_i, worst, best});
        }
    }
    return log;
}

std::vector<uint32_t> init_mask_random(Projection& proj, double p_mask, Rng& rng) {
    const uint32_t n_src = proj.src().n_hc, n_tgt = proj.tgt().n_hc;
    for (uint32_t i = 0; i < n_src; ++i)
        for (uint32_t j = 0; j < n_tgt; ++j)
            proj.set_mask(i, j, rng.next_double() < p_mask);

    std::vector<uint32_t> deg = proj.in_degrees();
    for (uint32_t j = 0; j < n_tgt; ++j) {
        if (deg[j] == 0) {
            proj.set_mask(uint32_t(rng.below(n_src)), j, true);
            deg[j] = 1;
        }
    }
    return deg;
}

} // namespace bcpnn
