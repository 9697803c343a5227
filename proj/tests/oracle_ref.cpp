#include "oracle_ref.hpp"

#include "bcpnn/errors.hpp"

namespace bcpnn::oracle {

ProbabilityTraces exact_statistics(const ToyDataset& toy) {
    if (toy.samples.empty()) throw DataError("exact_statistics: empty toy dataset");
    ProbabilityTraces tr(toy.src, toy.tgt);
    tr.k_p = 0.0;

    uint64_t total = 0;
    for (const ToySample& s : toy.samples) {
        if (s.count == 0) throw DataError("exact_statistics: zero count");
        if (s.src_mcs.size() != toy.src.n_hc)
            throw DimensionError("exact_statistics: sample has wrong HC count");
        total += s.count;
    }

    for (const ToySample& s : toy.samples) {
        const double f = double(s.count) / double(total);
        tr.p_tgt[s.tgt_mc] += f;
        for (uint32_t i = 0; i < toy.src.n_hc; ++i) {
            tr.p_src[size_t(i) * toy.src.mc_per_hc + s.src_mcs[i]] += f;
            tr.p_joint[tr.joint_index(i, 0, s.src_mcs[i], s.tgt_mc)] += f;
        }
    }
    return tr;
}

std::vector<double> enumerate_posterior(const ToyDataset& toy,
                                        std::span<const uint32_t> observation, double eps) {
    if (observation.size() != toy.src.n_hc)
        throw DimensionError("enumerate_posterior: observation has wrong HC count");
    const ProbabilityTraces tr = exact_statistics(toy);
    const auto floored = [eps](double p) { return p < eps ? eps : p; };

    std::vector<double> post(toy.tgt.mc_per_hc);
    double norm = 0.0;
    for (uint32_t b = 0; b < toy.tgt.mc_per_hc; ++b) {
        const double pb = floored(tr.p_tgt[b]);
        double acc = pb;
        for (uint32_t i = 0; i < toy.src.n_hc; ++i) {
            const uint32_t a = observation[i];
            const double joint = floored(tr.p_joint[tr.joint_index(i, 0, a, b)]);
            const double ps = floored(tr.p_src[size_t(i) * toy.src.mc_per_hc + a]);
            acc *= joint / (ps * pb);
        }
        post[b] = acc;
        norm += acc;
    }
    for (double& p : post) p /= norm;
    return post;
}

ToyDataset random_toy(Rng& rng, uint32_t max_hcs, uint32_t max_mcs, uint32_t max_samples) {
    ToyDataset toy;
    toy.src = LayerSpec{uint32_t(1 + rng.below(max_hcs)), uint32_t(2 + rng.below(max_mcs - 1))};
    toy.tgt = LayerSpec{1, uint32_t(2 + rng.below(max_mcs - 1))};

    const uint32_t n = uint32_t(1 + rng.below(max_samples));
    toy.samples.resize(n);
    for (ToySample& s : toy.samples) {
        s.src_mcs.resize(toy.src.n_hc);
        for (auto& a : s.src_mcs) a = uint32_t(rng.below(toy.src.mc_per_hc));
        s.tgt_mc = uint32_t(rng.below(toy.tgt.mc_per_hc));
        s.count = uint32_t(1 + rng.below(4));
    }
    return toy;
}

} // namespace bcpnn::oracle
