#include "bcpnn/projection.hpp"

#include <cmath>
#include <limits>

#include "bcpnn/parallel.hpp"

namespace bcpnn {

namespace {

inline double floored_log(double p, double eps) { return std::log(p < eps ? eps : p); }

} // namespace

std::vector<uint32_t> Projection::in_degrees() const {
    std::vector<uint32_t> deg(tgt_.n_hc, 0);
    for (uint32_t i = 0; i < src_.n_hc; ++i)
        for (uint32_t j = 0; j < tgt_.n_hc; ++j)
            deg[j] += mask_[size_t(i) * tgt_.n_hc + j];
    return deg;
}

std::vector<uint32_t> Projection::out_degrees() const {
    std::vector<uint32_t> deg(src_.n_hc, 0);
    for (uint32_t i = 0; i < src_.n_hc; ++i) {
        uint32_t d = 0;
        for (uint32_t j = 0; j < tgt_.n_hc; ++j) d += mask_[size_t(i) * tgt_.n_hc + j];
        deg[i] = d;
    }
    return deg;
}

void Projection::sync_blocks(double eps, bool active_only, int threads) {
    const uint32_t n_src = src_.n_hc, n_tgt = tgt_.n_hc;
    const uint32_t m_src = src_.mc_per_hc, m_tgt = tgt_.mc_per_hc;

    // log marginals are shared across blocks; precompute once.
    std::vector<double> log_src(traces.p_src.size());
    for (size_t u = 0; u < log_src.size(); ++u) log_src[u] = floored_log(traces.p_src[u], eps);
    std::vector<double> log_tgt(traces.p_tgt.size());
    for (size_t u = 0; u < log_tgt.size(); ++u) log_tgt[u] = floored_log(traces.p_tgt[u], eps);

    for (size_t u = 0; u < bias.size(); ++u) bias[u] = bias_gain[u] * log_tgt[u];

    const double kw = k_w_;
    parallel_for(n_src, threads, [&](size_t i0, size_t i1) {
        for (size_t i = i0; i < i1; ++i) {
            for (uint32_t j = 0; j < n_tgt; ++j) {
                if (active_only && mask_[i * n_tgt + j] == 0) continue;
                const size_t base = traces.block(uint32_t(i), j);
                const double* pj = traces.p_joint.data() + base;
                double* w = weights.data() + base;
                for (uint32_t a = 0; a < m_src; ++a) {
                    const double ls = log_src[i * m_src + a];
                    const double* pr = pj + size_t(a) * m_tgt;
                    double* wr = w + size_t(a) * m_tgt;
                    for (uint32_t b = 0; b < m_tgt; ++b)
                        wr[b] = kw * (floored_log(pr[b], eps) - ls - log_tgt[size_t(j) * m_tgt + b]);
                }
            }
        }
    });
}

void Projection::sync_parameters(double eps, int threads) { sync_blocks(eps, false, threads); }
void Projection::sync_parameters_active(double eps, int threads) { sync_blocks(eps, true, threads); }

SyncedParameters sync_parameters(const ProbabilityTraces& traces, double k_w,
                                 std::span<const double> k_beta, double eps) {
    if (k_beta.size() != traces.p_tgt.size())
        throw DimensionError("sync_parameters: bias gain count " + std::to_string(k_beta.size()) +
                             " != target unit count " + std::to_string(traces.p_tgt.size()));
    SyncedParameters out;
    out.weights.resize(traces.p_joint.size());
    out.bias.resize(traces.p_tgt.size());

    const uint32_t m_src = traces.src.mc_per_hc, m_tgt = traces.tgt.mc_per_hc;
    for (size_t u = 0; u < out.bias.size(); ++u)
        out.bias[u] = k_beta[u] * floored_log(traces.p_tgt[u], eps);
    for (uint32_t i = 0; i < traces.src.n_hc; ++i) {
        for (uint32_t j = 0; j < traces.tgt.n_hc; ++j) {
            const size_t base = traces.block(i, j);
            for (uint32_t a = 0; a < m_src; ++a) {
                const double ls = floored_log(traces.p_src[size_t(i) * m_src + a], eps);
                for (uint32_t b = 0; b < m_tgt; ++b) {
                    const double lt = floored_log(traces.p_tgt[size_t(j) * m_tgt + b], eps);
                    const size_t idx = base + size_t(a) * m_tgt + b;
                    out.weights[idx] = k_w * (floored_log(traces.p_joint[idx], eps) - ls - lt);
                }
            }
        }
    }
    return out;
}

Activity softmax_normalize(const LayerSpec& layer, std::span<const double> support, double gamma) {
    if (support.size() != layer.units())
        throw DimensionError("softmax_normalize: support size " + std::to_string(support.size()) +
                             " != unit count " + std::to_string(layer.units()));
    Activity out(layer);
    const uint32_t m = layer.mc_per_hc;
    for (uint32_t hc = 0; hc < layer.n_hc; ++hc) {
        const double* h = support.data() + size_t(hc) * m;
        double* pi = out.values.data() + size_t(hc) * m;
        double mx = -std::numeric_limits<double>::infinity();
        for (uint32_t b = 0; b < m; ++b) {
            if (!std::isfinite(h[b]))
                throw NumericError("softmax_normalize: non-finite support in HC " + std::to_string(hc));
            mx = std::max(mx, gamma * h[b]);
        }
        double sum = 0.0;
        for (uint32_t b = 0; b < m; ++b) {
            pi[b] = std::exp(gamma * h[b] - mx);
            sum += pi[b];
        }
        for (uint32_t b = 0; b < m; ++b) pi[b] /= sum;
    }
    return out;
}

std::vector<double> compute_support(const Activity& src_activity, const Projection& proj,
                                    int threads) {
    if (src_activity.layer != proj.src())
        throw DimensionError("compute_support: source activity layout does not match projection");

    const uint32_t n_src = proj.src().n_hc, n_tgt = proj.tgt().n_hc;
    const uint32_t m_src = proj.src().mc_per_hc, m_tgt = proj.tgt().mc_per_hc;
    std::vector<double> h(proj.bias.begin(), proj.bias.end());
    const double* sv = src_activity.values.data();

    parallel_for(n_tgt, threads, [&](size_t j0, size_t j1) {
        for (size_t j = j0; j < j1; ++j) {
            double* hj = h.data() + j * m_tgt;
            for (uint32_t i = 0; i < n_src; ++i) {
                if (!proj.masked(i, uint32_t(j))) continue;
                const double* w = proj.weights.data() + proj.traces.block(i, uint32_t(j));
                for (uint32_t a = 0; a < m_src; ++a) {
                    const double s = sv[size_t(i) * m_src + a];
                    if (s == 0.0) continue;
                    const double* wr = w + size_t(a) * m_tgt;
                    for (uint32_t b = 0; b < m_tgt; ++b) hj[b] += s * wr[b];
                }
            }
        }
    });
    return h;
}

Activity infer(const Activity& src_activity, const Projection& proj, double gamma, int threads) {
    return softmax_normalize(proj.tgt(), compute_support(src_activity, proj, threads), gamma);
}

} // namespace bcpnn
