#include "bcpnn/classifier.hpp"

#include "bcpnn/errors.hpp"

namespace bcpnn {

ClassifierMode classifier_mode_from_string(const std::string& s) {
    if (s == "go") return ClassifierMode::Go;
    if (s == "nogo") return ClassifierMode::NoGo;
    if (s == "go_nogo") return ClassifierMode::GoPlusNoGo;
    throw ConfigError("classifier_mode must be one of go, nogo, go_nogo; got '" + s + "'");
}

std::string to_string(ClassifierMode mode) {
    switch (mode) {
        case ClassifierMode::Go: return "go";
        case ClassifierMode::NoGo: return "nogo";
        case ClassifierMode::GoPlusNoGo: return "go_nogo";
    }
    return "?";
}

GoNoGoClassifier GoNoGoClassifier::make(LayerSpec source, LayerSpec output, ClassifierMode mode,
                                        double tau_p) {
    GoNoGoClassifier clf;
    clf.mode = mode;
    clf.go = Projection(source, output, +1.0);
    clf.nogo = Projection(source, output, -1.0);
    clf.go.traces.tau_p = tau_p;
    clf.nogo.traces.tau_p = tau_p;
    // The label prior must enter the support once: only Go carries a bias.
    for (auto& g : clf.nogo.bias_gain) g = 0.0;
    return clf;
}

Prediction predict(const Activity& source_act, const GoNoGoClassifier& clf, double gamma) {
    std::vector<double> h = compute_support(source_act, clf.go);
    std::vector<double> h_nogo = compute_support(source_act, clf.nogo);
    for (size_t u = 0; u < h.size(); ++u) h[u] += h_nogo[u];

    Prediction pred;
    pred.posterior = softmax_normalize(clf.go.tgt(), h, gamma);
    uint32_t best = 0;
    for (uint32_t b = 1; b < pred.posterior.values.size(); ++b)
        if (pred.posterior.values[b] > pred.posterior.values[best]) best = b;
    pred.label = best;
    return pred;
}

bool train_step(const Activity& source_act, uint32_t true_label, GoNoGoClassifier& clf,
                double dt, double gamma, double eps) {
    const LayerSpec out = clf.output_layer();
    if (true_label >= out.mc_per_hc)
        throw DataError("train_step: label " + std::to_string(true_label) +
                        " outside [0, " + std::to_string(out.mc_per_hc - 1) + "]");

    const Prediction pred = predict(source_act, clf, gamma);
    if (pred.label == true_label) return false;

    if (clf.mode == ClassifierMode::Go || clf.mode == ClassifierMode::GoPlusNoGo) {
        update_traces(clf.go.traces, source_act, Activity::one_hot(out, true_label), dt);
        clf.go.sync_parameters(eps);
        clf.trace_updates += 1;
    }
    if (clf.mode == ClassifierMode::NoGo || clf.mode == ClassifierMode::GoPlusNoGo) {
        update_traces(clf.nogo.traces, source_act, Activity::one_hot(out, pred.label), dt);
        clf.nogo.sync_parameters(eps);
        clf.trace_updates += 1;
    }
    return true;
}

} // namespace bcpnn
