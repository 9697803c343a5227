#pragma once

#include <cstdint>
#include <string>

#include "bcpnn/projection.hpp"
#include "bcpnn/rng.hpp"

namespace bcpnn {

enum class ClassifierMode { Go, NoGo, GoPlusNoGo };

ClassifierMode classifier_mode_from_string(const std::string& s); // "go" | "nogo" | "go_nogo"
std::string to_string(ClassifierMode mode);

// Error-driven read-out from a frozen representation. Two fully connected
// projections share the source layer: Go (k_w = +1) learns toward the true
// label on errors, No-Go (k_w = -1) learns toward the wrongly predicted
// label. Only the Go projection contributes a bias, so the label prior
// enters the support exactly once.
struct GoNoGoClassifier {
    ClassifierMode mode = ClassifierMode::GoPlusNoGo;
    Projection go;   // k_w = +1, bias gains 1
    Projection nogo; // k_w = -1, bias gains 0
    uint64_t trace_updates = 0; // projections updated so far (error-gated)

    const LayerSpec& output_layer() const { return go.tgt(); }

    // Traces start exactly uniform: the error signal breaks symmetry, and
    // an untrained classifier must tie-break to label 0.
    static GoNoGoClassifier make(LayerSpec source, LayerSpec output, ClassifierMode mode,
                                 double tau_p);
};

struct Prediction {
    uint32_t label = 0;
    Activity posterior;
};

// Support = Go bias + Go weight drive + No-Go weight drive; softmax with
// gain gamma; argmax with lowest-index tie-break.
Prediction predict(const Activity& source_act, const GoNoGoClassifier& clf, double gamma);

// One error-gated step. Returns true if the sample was misclassified and
// traces were updated (and parameters resynchronized), false for a correct
// prediction, which leaves the classifier bit-identical.
bool train_step(const Activity& source_act, uint32_t true_label, GoNoGoClassifier& clf,
                double dt, double gamma, double eps);

} // namespace bcpnn
