#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bcpnn/projection.hpp"
#include "oracle_ref.hpp"

using namespace bcpnn;
using oracle::ToyDataset;

namespace {
constexpr double kEps = 1e-8;
}

TEST_CASE("exact statistics: a single repeated sample concentrates the joint") {
    ToyDataset toy;
    toy.src = LayerSpec{2, 2};
    toy.tgt = LayerSpec{1, 3};
    toy.samples = {{{1, 0}, 2, 5}};
    ProbabilityTraces tr = oracle::exact_statistics(toy);
    CHECK(tr.p_joint[tr.joint_index(0, 0, 1, 2)] == 1.0);
    CHECK(tr.p_joint[tr.joint_index(1, 0, 0, 2)] == 1.0);
    CHECK(tr.p_tgt[2] == 1.0);
    CHECK(tr.p_src[1] == 1.0);
}

TEST_CASE("exact statistics: counting the four-sample dataset") {
    ToyDataset toy;
    toy.src = LayerSpec{1, 2};
    toy.tgt = LayerSpec{1, 2};
    toy.samples = {{{0}, 0, 2}, {{1}, 1, 2}};
    ProbabilityTraces tr = oracle::exact_statistics(toy);
    CHECK(tr.p_joint[tr.joint_index(0, 0, 0, 0)] == 0.5);
    CHECK(tr.p_joint[tr.joint_index(0, 0, 1, 1)] == 0.5);
    CHECK(tr.p_joint[tr.joint_index(0, 0, 0, 1)] == 0.0);
    CHECK(tr.p_src[0] == 0.5);
    CHECK(tr.p_tgt[1] == 0.5);
}

TEST_CASE("exact statistics: uniform dataset gives zero weights after sync") {
    ToyDataset toy;
    toy.src = LayerSpec{1, 2};
    toy.tgt = LayerSpec{1, 2};
    toy.samples = {{{0}, 0, 1}, {{0}, 1, 1}, {{1}, 0, 1}, {{1}, 1, 1}};
    ProbabilityTraces tr = oracle::exact_statistics(toy);
    SyncedParameters p = sync_parameters(tr, +1.0, std::vector<double>{1.0, 1.0}, kEps);
    for (double w : p.weights) CHECK(std::abs(w) < 1e-12);
}

TEST_CASE("exact statistics: marginal consistency holds exactly") {
    Rng rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        ToyDataset toy = oracle::random_toy(rng);
        ProbabilityTraces tr = oracle::exact_statistics(toy);
        for (uint32_t i = 0; i < toy.src.n_hc; ++i) {
            for (uint32_t a = 0; a < toy.src.mc_per_hc; ++a) {
                double row = 0.0;
                for (uint32_t b = 0; b < toy.tgt.mc_per_hc; ++b)
                    row += tr.p_joint[tr.joint_index(i, 0, a, b)];
                CHECK(std::abs(row - tr.p_src[size_t(i) * toy.src.mc_per_hc + a]) < 1e-15);
            }
        }
    }
}

TEST_CASE("enumeration: independent target returns its marginal") {
    ToyDataset toy;
    toy.src = LayerSpec{1, 2};
    toy.tgt = LayerSpec{1, 2};
    // target split 3:1 regardless of the source value
    toy.samples = {{{0}, 0, 3}, {{0}, 1, 1}, {{1}, 0, 3}, {{1}, 1, 1}};
    std::vector<double> post = oracle::enumerate_posterior(toy, std::vector<uint32_t>{0}, kEps);
    CHECK(post[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(post[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("enumeration: deterministic mapping is one-hot up to the floor") {
    ToyDataset toy;
    toy.src = LayerSpec{2, 2};
    toy.tgt = LayerSpec{1, 2};
    toy.samples = {{{0, 0}, 0, 4}, {{1, 1}, 1, 4}};
    std::vector<double> post =
        oracle::enumerate_posterior(toy, std::vector<uint32_t>{0, 0}, kEps);
    CHECK(post[0] > 1.0 - 1e-6);
    CHECK(post[1] < 1e-6);
}

TEST_CASE("enumeration: source HC order does not matter") {
    Rng rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        ToyDataset toy = oracle::random_toy(rng, 3, 3);
        if (toy.src.n_hc < 2) continue;
        ToyDataset swapped = toy;
        for (auto& s : swapped.samples) std::swap(s.src_mcs[0], s.src_mcs[1]);
        std::vector<uint32_t> obs(toy.src.n_hc);
        for (auto& a : obs) a = uint32_t(rng.below(toy.src.mc_per_hc));
        std::vector<uint32_t> obs_swapped(obs);
        std::swap(obs_swapped[0], obs_swapped[1]);
        std::vector<double> p1 = oracle::enumerate_posterior(toy, obs, kEps);
        std::vector<double> p2 = oracle::enumerate_posterior(swapped, obs_swapped, kEps);
        for (size_t b = 0; b < p1.size(); ++b)
            CHECK(p1[b] == doctest::Approx(p2[b]).epsilon(1e-12));
    }
}

TEST_CASE("enumeration: empty dataset is rejected") {
    ToyDataset toy;
    toy.src = LayerSpec{1, 2};
    toy.tgt = LayerSpec{1, 2};
    CHECK_THROWS_AS(oracle::exact_statistics(toy), DataError);
}
