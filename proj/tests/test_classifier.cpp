#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bcpnn/classifier.hpp"

using namespace bcpnn;

namespace {

constexpr double kEps = 1e-8;
constexpr double kDt = 0.01;
constexpr double kTau = 1.0;
constexpr double kGamma = 1.0;

const LayerSpec kToySource{4, 2};
const LayerSpec kOutput{1, 10};

struct ToySample {
    Activity act;
    uint32_t label;
};

// Two linearly separable classes over four binary HCs: class 0 sits near
// the all-zeros pattern, class 1 near all-ones, with one HC flipped per
// variant.
std::vector<ToySample> separable_toy() {
    std::vector<ToySample> samples;
    for (uint32_t cls = 0; cls < 2; ++cls) {
        for (uint32_t variant = 0; variant <= kToySource.n_hc; ++variant) {
            std::vector<uint32_t> mcs(kToySource.n_hc, cls);
            if (variant < kToySource.n_hc) mcs[variant] = 1 - cls;
            samples.push_back({Activity::one_hot(kToySource, mcs), cls});
        }
    }
    return samples;
}

GoNoGoClassifier fresh(ClassifierMode mode) {
    GoNoGoClassifier clf = GoNoGoClassifier::make(kToySource, kOutput, mode, kTau);
    clf.go.sync_parameters(kEps);
    clf.nogo.sync_parameters(kEps);
    return clf;
}

uint32_t train_epochs(GoNoGoClassifier& clf, const std::vector<ToySample>& toy, int epochs) {
    uint32_t last_errors = 0;
    for (int e = 0; e < epochs; ++e) {
        last_errors = 0;
        for (const ToySample& s : toy)
            if (train_step(s.act, s.label, clf, kDt, kGamma, kEps)) ++last_errors;
    }
    return last_errors;
}

} // namespace

TEST_CASE("untrained classifier: uniform posterior, tie-break to label 0") {
    GoNoGoClassifier clf = fresh(ClassifierMode::GoPlusNoGo);
    Prediction p = predict(Activity::uniform(kToySource), clf, kGamma);
    CHECK(p.label == 0);
    for (double v : p.posterior.values) CHECK(v == doctest::Approx(0.1).epsilon(1e-12));

    Activity some = Activity::one_hot(kToySource, 1u);
    CHECK(predict(some, clf, kGamma).label == 0);
}

TEST_CASE("Go-only training equals a bare Go projection classifier") {
    GoNoGoClassifier clf = fresh(ClassifierMode::Go);
    const std::vector<ToySample> toy = separable_toy();
    train_epochs(clf, toy, 30);

    // The untrained No-Go projection has independent traces and zero bias
    // gain, so it contributes nothing: a classifier that consults only the
    // Go projection must agree everywhere.
    for (const ToySample& s : toy) {
        Prediction full = predict(s.act, clf, kGamma);
        std::vector<double> h = compute_support(s.act, clf.go);
        Activity bare = softmax_normalize(kOutput, h, kGamma);
        uint32_t bare_label = 0;
        for (uint32_t b = 1; b < bare.values.size(); ++b)
            if (bare.values[b] > bare.values[bare_label]) bare_label = b;
        CHECK(full.label == bare_label);
        for (size_t u = 0; u < bare.values.size(); ++u)
            CHECK(full.posterior.values[u] == doctest::Approx(bare.values[u]).epsilon(1e-12));
    }
}

TEST_CASE("swapping the trained projection into No-Go flips the class ranking") {
    GoNoGoClassifier trained = fresh(ClassifierMode::Go);
    const std::vector<ToySample> toy = separable_toy();
    train_epochs(trained, toy, 30);

    GoNoGoClassifier swapped = fresh(ClassifierMode::NoGo);
    swapped.nogo.traces = trained.go.traces; // same statistics, negative gain
    swapped.nogo.sync_parameters(kEps);

    for (const ToySample& s : toy) {
        Prediction a = predict(s.act, trained, kGamma);
        Prediction b = predict(s.act, swapped, kGamma);
        const double diff_a = a.posterior.values[0] - a.posterior.values[1];
        const double diff_b = b.posterior.values[0] - b.posterior.values[1];
        CHECK(diff_a * diff_b < 0.0);
    }
}

TEST_CASE("correct predictions leave the classifier bit-identical") {
    GoNoGoClassifier clf = fresh(ClassifierMode::GoPlusNoGo);
    const std::vector<ToySample> toy = separable_toy();
    train_epochs(clf, toy, 40); // should reach zero training errors

    GoNoGoClassifier before = clf;
    for (const ToySample& s : toy) {
        const bool updated = train_step(s.act, s.label, clf, kDt, kGamma, kEps);
        CHECK_FALSE(updated);
    }
    CHECK(clf.go.traces.p_src == before.go.traces.p_src);
    CHECK(clf.go.traces.p_tgt == before.go.traces.p_tgt);
    CHECK(clf.go.traces.p_joint == before.go.traces.p_joint);
    CHECK(clf.nogo.traces.p_joint == before.nogo.traces.p_joint);
    CHECK(clf.trace_updates == before.trace_updates);
}

TEST_CASE("Go mode never touches the No-Go projection") {
    GoNoGoClassifier clf = fresh(ClassifierMode::Go);
    const std::vector<ToySample> toy = separable_toy();
    ProbabilityTraces nogo_before = clf.nogo.traces;
    train_epochs(clf, toy, 5);
    CHECK(clf.nogo.traces.p_src == nogo_before.p_src);
    CHECK(clf.nogo.traces.p_tgt == nogo_before.p_tgt);
    CHECK(clf.nogo.traces.p_joint == nogo_before.p_joint);
}

TEST_CASE("one wrong GoPlusNoGo step moves both target traces as one Euler step") {
    GoNoGoClassifier clf = fresh(ClassifierMode::GoPlusNoGo);
    Activity x = Activity::one_hot(kToySource, 1u);
    const uint32_t true_label = 3;
    const Prediction before = predict(x, clf, kGamma);
    REQUIRE(before.label != true_label);

    const std::vector<double> go_tgt = clf.go.traces.p_tgt;
    const std::vector<double> nogo_tgt = clf.nogo.traces.p_tgt;
    REQUIRE(train_step(x, true_label, clf, kDt, kGamma, kEps));

    const double c = kDt / kTau; // k_p = 1
    for (uint32_t b = 0; b < kOutput.mc_per_hc; ++b) {
        const double go_pi = b == true_label ? 1.0 : 0.0;
        const double nogo_pi = b == before.label ? 1.0 : 0.0;
        CHECK(clf.go.traces.p_tgt[b] ==
              doctest::Approx((1 - c) * go_tgt[b] + c * go_pi).epsilon(1e-14));
        CHECK(clf.nogo.traces.p_tgt[b] ==
              doctest::Approx((1 - c) * nogo_tgt[b] + c * nogo_pi).epsilon(1e-14));
    }
    CHECK(clf.trace_updates == 2);
}

TEST_CASE("labels outside the output layer are rejected") {
    GoNoGoClassifier clf = fresh(ClassifierMode::Go);
    CHECK_THROWS_AS(train_step(Activity::uniform(kToySource), 10, clf, kDt, kGamma, kEps),
                    DataError);
}

TEST_CASE("trace update count equals errors times projections-per-mode") {
    const std::vector<ToySample> toy = separable_toy();
    for (ClassifierMode mode :
         {ClassifierMode::Go, ClassifierMode::NoGo, ClassifierMode::GoPlusNoGo}) {
        GoNoGoClassifier clf = fresh(mode);
        uint64_t errors = 0;
        for (int e = 0; e < 10; ++e)
            for (const ToySample& s : toy)
                if (train_step(s.act, s.label, clf, kDt, kGamma, kEps)) ++errors;
        const uint64_t per_error = mode == ClassifierMode::GoPlusNoGo ? 2 : 1;
        CHECK(clf.trace_updates == errors * per_error);
    }
}

TEST_CASE("all three modes reach 100% on the separable toy set within 50 epochs") {
    const std::vector<ToySample> toy = separable_toy();
    for (ClassifierMode mode :
         {ClassifierMode::Go, ClassifierMode::NoGo, ClassifierMode::GoPlusNoGo}) {
        GoNoGoClassifier clf = fresh(mode);
        train_epochs(clf, toy, 50);
        uint32_t correct = 0;
        for (const ToySample& s : toy)
            if (predict(s.act, clf, kGamma).label == s.label) ++correct;
        INFO("mode ", to_string(mode));
        CHECK(correct == toy.size());
    }
}

TEST_CASE("mode names round-trip") {
    for (const char* name : {"go", "nogo", "go_nogo"})
        CHECK(to_string(classifier_mode_from_string(name)) == name);
    CHECK_THROWS_AS(classifier_mode_from_string("both"), ConfigError);
}
