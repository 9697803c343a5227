#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bcpnn/projection.hpp"
#include "oracle_ref.hpp"

using namespace bcpnn;

namespace {

constexpr double kEps = 1e-8;

// Full-mask projection with unit gains, parameters taken from exact toy
// statistics.
Projection projection_from_toy(const oracle::ToyDataset& toy) {
    Projection proj(toy.src, toy.tgt, +1.0);
    proj.traces = oracle::exact_statistics(toy);
    proj.sync_parameters(kEps);
    return proj;
}

oracle::ToyDataset xor_free_toy() {
    // {(x=0, y=0) x2, (x=1, y=1) x2}
    oracle::ToyDataset toy;
    toy.src = LayerSpec{1, 2};
    toy.tgt = LayerSpec{1, 2};
    toy.samples = {{{0}, 0, 2}, {{1}, 1, 2}};
    return toy;
}

} // namespace

TEST_CASE("softmax: symmetric supports split evenly") {
    LayerSpec layer{1, 2};
    Activity a = softmax_normalize(layer, std::vector<double>{0.0, 0.0}, 1.0);
    CHECK(a.values[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(a.values[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("softmax: zero gain gives the uniform distribution") {
    LayerSpec layer{2, 3};
    Activity a = softmax_normalize(layer, std::vector<double>{5.0, -2.0, 0.3, 100.0, 1.0, -7.0}, 0.0);
    for (double v : a.values) CHECK(v == doctest::Approx(1.0 / 3).epsilon(1e-15));
}

TEST_CASE("softmax: hand-computed two-way case") {
    LayerSpec layer{1, 2};
    Activity a = softmax_normalize(layer, std::vector<double>{std::log(3.0), 0.0}, 1.0);
    CHECK(a.values[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(a.values[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("softmax: non-finite support is rejected naming the HC") {
    LayerSpec layer{3, 2};
    std::vector<double> h(layer.units(), 0.0);
    h[4] = std::numeric_limits<double>::infinity(); // HC 2
    try {
        softmax_normalize(layer, h, 1.0);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("HC 2") != std::string::npos);
    }
}

TEST_CASE("softmax: every HC sums to one") {
    Rng rng(11);
    LayerSpec layer{4, 7};
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> h(layer.units());
        for (auto& v : h) v = rng.uniform(-40.0, 40.0);
        Activity a = softmax_normalize(layer, h, rng.uniform(0.0, 3.0));
        for (uint32_t hc = 0; hc < layer.n_hc; ++hc) {
            double sum = 0.0;
            for (double v : a.hc_span(hc)) {
                sum += v;
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
            CHECK(std::abs(sum - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("support: independent traces give h = bias") {
    LayerSpec src{2, 2}, tgt{1, 2};
    Projection proj(src, tgt, +1.0);
    proj.sync_parameters(kEps); // uniform traces: joint = product, so w = 0
    Activity x = Activity::uniform(src);
    std::vector<double> h = compute_support(x, proj);
    CHECK(h[0] == doctest::Approx(std::log(0.5)).epsilon(1e-12));
    CHECK(h[1] == doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("support: fully silent mask leaves exactly the bias") {
    LayerSpec src{3, 2}, tgt{2, 4};
    Projection proj(src, tgt, +1.0);
    Rng rng(3);
    proj.traces = ProbabilityTraces::noisy_init(src, tgt, rng);
    for (uint32_t i = 0; i < src.n_hc; ++i)
        for (uint32_t j = 0; j < tgt.n_hc; ++j) proj.set_mask(i, j, false);
    proj.sync_parameters(kEps);
    Activity x = Activity::uniform(src);
    std::vector<double> h = compute_support(x, proj);
    for (size_t u = 0; u < h.size(); ++u) CHECK(h[u] == proj.bias[u]);
}

TEST_CASE("support: equals the enumerated log-posterior up to a per-HC shift") {
    oracle::ToyDataset toy = xor_free_toy();
    Projection proj = projection_from_toy(toy);
    const uint32_t obs[] = {0};
    Activity x = Activity::one_hot(toy.src, obs);
    std::vector<double> h = compute_support(x, proj);
    std::vector<double> post = oracle::enumerate_posterior(toy, obs, kEps);
    const double shift = h[0] - std::log(post[0]);
    for (uint32_t b = 0; b < 2; ++b)
        CHECK(h[b] - std::log(post[b]) == doctest::Approx(shift).epsilon(1e-9));
}

TEST_CASE("support: shape mismatch raises a dimension error") {
    Projection proj(LayerSpec{2, 2}, LayerSpec{1, 2}, +1.0);
    Activity wrong = Activity::uniform(LayerSpec{3, 2});
    CHECK_THROWS_AS(compute_support(wrong, proj), DimensionError);
}

TEST_CASE("traces: frozen plasticity leaves them untouched") {
    LayerSpec src{1, 2}, tgt{1, 2};
    ProbabilityTraces tr = ProbabilityTraces::uniform_init(src, tgt);
    tr.k_p = 0.0;
    ProbabilityTraces before = tr;
    update_traces(tr, Activity::one_hot(src, 0u), Activity::one_hot(tgt, 1u), 0.01);
    CHECK(tr.p_src == before.p_src);
    CHECK(tr.p_tgt == before.p_tgt);
    CHECK(tr.p_joint == before.p_joint);
}

TEST_CASE("traces: one Euler step by hand") {
    LayerSpec src{1, 2}, tgt{1, 2};
    ProbabilityTraces tr = ProbabilityTraces::uniform_init(src, tgt);
    tr.tau_p = 1.0;
    tr.k_p = 1.0;
    update_traces(tr, Activity::one_hot(src, 0u), Activity::one_hot(tgt, 0u), 0.01);
    // p = 0.5, pi = 1.0, rate 0.01 -> 0.505
    CHECK(tr.p_src[0] == doctest::Approx(0.505).epsilon(1e-15));
    CHECK(tr.p_src[1] == doctest::Approx(0.495).epsilon(1e-15));
}

TEST_CASE("traces: constant drive converges geometrically") {
    LayerSpec src{1, 2}, tgt{1, 2};
    ProbabilityTraces tr = ProbabilityTraces::uniform_init(src, tgt);
    tr.tau_p = 1.0;
    Activity xs = Activity::one_hot(src, 0u), xt = Activity::one_hot(tgt, 1u);
    const double rate = 0.05;
    double err_prev = std::abs(tr.p_src[0] - 1.0);
    for (int step = 0; step < 50; ++step) {
        update_traces(tr, xs, xt, rate); // tau_p = 1, dt = rate
        const double err = std::abs(tr.p_src[0] - 1.0);
        CHECK(err == doctest::Approx(err_prev * (1.0 - rate)).epsilon(1e-9));
        err_prev = err;
    }
    CHECK(tr.p_src[0] == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("sync: independent joint gives zero weights") {
    LayerSpec src{2, 3}, tgt{1, 4};
    Rng rng(5);
    ProbabilityTraces tr = ProbabilityTraces::noisy_init(src, tgt, rng);
    SyncedParameters p = sync_parameters(tr, +1.0, std::vector<double>(tgt.units(), 1.0), kEps);
    for (double w : p.weights) CHECK(std::abs(w) < 1e-12);
}

TEST_CASE("sync: negative weight gain mirrors the positive one") {
    oracle::ToyDataset toy = xor_free_toy();
    ProbabilityTraces tr = oracle::exact_statistics(toy);
    std::vector<double> ones(toy.tgt.units(), 1.0);
    SyncedParameters plus = sync_parameters(tr, +1.0, ones, kEps);
    SyncedParameters minus = sync_parameters(tr, -1.0, ones, kEps);
    for (size_t k = 0; k < plus.weights.size(); ++k)
        CHECK(minus.weights[k] == doctest::Approx(-plus.weights[k]).epsilon(1e-15));
}

TEST_CASE("sync: floored off-diagonal weights") {
    oracle::ToyDataset toy = xor_free_toy();
    ProbabilityTraces tr = oracle::exact_statistics(toy);
    SyncedParameters p = sync_parameters(tr, +1.0, std::vector<double>{1.0, 1.0}, kEps);
    // diag joint 0.5, marginals 0.5 -> ln 2; off-diag floored to eps
    CHECK(p.weights[tr.joint_index(0, 0, 0, 0)] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(p.weights[tr.joint_index(0, 0, 0, 1)] ==
          doctest::Approx(std::log(kEps / 0.25)).epsilon(1e-12));
    CHECK(p.bias[0] == doctest::Approx(std::log(0.5)).epsilon(1e-12));
    for (double w : p.weights) CHECK(std::isfinite(w));
}

TEST_CASE("infer: uniform traces give the uniform posterior") {
    LayerSpec src{4, 2}, tgt{2, 5};
    Projection proj(src, tgt, +1.0);
    proj.sync_parameters(kEps);
    Activity post = infer(Activity::uniform(src), proj, 1.0);
    for (double v : post.values) CHECK(v == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("infer: per-HC support shifts do not change the posterior") {
    oracle::ToyDataset toy = xor_free_toy();
    Projection proj = projection_from_toy(toy);
    Activity x = Activity::one_hot(toy.src, 0u);
    std::vector<double> h = compute_support(x, proj);
    Activity a = softmax_normalize(toy.tgt, h, 1.0);
    for (double& v : h) v += 123.456;
    Activity b = softmax_normalize(toy.tgt, h, 1.0);
    for (size_t u = 0; u < a.values.size(); ++u)
        CHECK(a.values[u] == doctest::Approx(b.values[u]).epsilon(1e-12));
}

TEST_CASE("infer matches the enumeration oracle on random toys") {
    Rng rng(2024);
    for (int rep = 0; rep < 100; ++rep) {
        oracle::ToyDataset toy = oracle::random_toy(rng);
        Projection proj = projection_from_toy(toy);
        std::vector<uint32_t> obs(toy.src.n_hc);
        for (auto& a : obs) a = uint32_t(rng.below(toy.src.mc_per_hc));
        Activity x = Activity::one_hot(toy.src, obs);
        Activity got = infer(x, proj, 1.0);
        std::vector<double> want = oracle::enumerate_posterior(toy, obs, kEps);
        for (uint32_t b = 0; b < toy.tgt.mc_per_hc; ++b)
            CHECK(std::abs(got.values[b] - want[b]) < 1e-9);
    }
}

TEST_CASE("traces: marginal consistency survives 1e5 random steps") {
    LayerSpec src{2, 3}, tgt{2, 2};
    Rng rng(77);
    ProbabilityTraces tr = ProbabilityTraces::noisy_init(src, tgt, rng);
    tr.tau_p = 20.0;

    auto random_activity = [&rng](LayerSpec spec) {
        Activity a(spec);
        for (uint32_t hc = 0; hc < spec.n_hc; ++hc) {
            double sum = 0.0;
            for (uint32_t mc = 0; mc < spec.mc_per_hc; ++mc) {
                a.at(hc, mc) = 0.01 + rng.next_double();
                sum += a.at(hc, mc);
            }
            for (uint32_t mc = 0; mc < spec.mc_per_hc; ++mc) a.at(hc, mc) /= sum;
        }
        return a;
    };

    for (int step = 0; step < 100000; ++step)
        update_traces(tr, random_activity(src), random_activity(tgt), 0.01);

    for (uint32_t i = 0; i < src.n_hc; ++i) {
        for (uint32_t j = 0; j < tgt.n_hc; ++j) {
            for (uint32_t a = 0; a < src.mc_per_hc; ++a) {
                double row = 0.0;
                for (uint32_t b = 0; b < tgt.mc_per_hc; ++b)
                    row += tr.p_joint[tr.joint_index(i, j, a, b)];
                CHECK(std::abs(row - tr.p_src[size_t(i) * src.mc_per_hc + a]) < 1e-9);
            }
            for (uint32_t b = 0; b < tgt.mc_per_hc; ++b) {
                double col = 0.0;
                for (uint32_t a = 0; a < src.mc_per_hc; ++a)
                    col += tr.p_joint[tr.joint_index(i, j, a, b)];
                CHECK(std::abs(col - tr.p_tgt[size_t(j) * tgt.mc_per_hc + b]) < 1e-9);
            }
            double block = 0.0;
            for (uint32_t a = 0; a < src.mc_per_hc; ++a)
                for (uint32_t b = 0; b < tgt.mc_per_hc; ++b)
                    block += tr.p_joint[tr.joint_index(i, j, a, b)];
            CHECK(std::abs(block - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("traces: i.i.d. samples drive weights to the analytic log-odds") {
    // known 2x2 joint
    const double joint[2][2] = {{0.4, 0.1}, {0.15, 0.35}};
    LayerSpec src{1, 2}, tgt{1, 2};
    ProbabilityTraces tr = ProbabilityTraces::uniform_init(src, tgt);
    tr.tau_p = 500.0; // dt = 0.01 -> tau_p/dt = 5e4 steps per time constant

    Rng rng(99);
    const long steps = long(20.0 * tr.tau_p / 0.01);
    for (long s = 0; s < steps; ++s) {
        const double u = rng.next_double();
        uint32_t a, b;
        if (u < joint[0][0]) { a = 0; b = 0; }
        else if (u < joint[0][0] + joint[0][1]) { a = 0; b = 1; }
        else if (u < joint[0][0] + joint[0][1] + joint[1][0]) { a = 1; b = 0; }
        else { a = 1; b = 1; }
        update_traces(tr, Activity::one_hot(src, a), Activity::one_hot(tgt, b), 0.01);
    }

    SyncedParameters p = sync_parameters(tr, +1.0, std::vector<double>{1.0, 1.0}, kEps);
    const double ps[2] = {0.5, 0.5};
    const double pt[2] = {0.55, 0.45};
    for (uint32_t a = 0; a < 2; ++a)
        for (uint32_t b = 0; b < 2; ++b) {
            const double want = std::log(joint[a][b] / (ps[a] * pt[b]));
            CHECK(std::abs(p.weights[tr.joint_index(0, 0, a, b)] - want) < 2e-2);
        }
}
