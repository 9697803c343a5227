#pragma once

#include <functional>
#include <span>
#include <string>

#include "bcpnn/checkpoint.hpp"
#include "bcpnn/metrics.hpp"
#include "bcpnn/mnist.hpp"
#include "bcpnn/model.hpp"

namespace bcpnn {

// Called after every rewiring event with the event index, the executed
// flips, and the model state (mask already updated).
using FlipObserver =
    std::function<void(uint64_t event_index, const std::vector<FlipRecord>&, const Model&)>;

struct UnsupMetrics {
    CsvWriter entropy_csv{"epoch,hc,marginal_entropy_nats"};
    CsvWriter flips_csv{"event,hidden_hc,removed_src,added_src,ihat_removed,ihat_added"};
    std::vector<double> mean_entropy_per_epoch;
};

// Per presentation: encode, infer the hidden posterior, advance the traces
// and bias gains by dt, and every flip_interval presentations recompute
// normalized MI and rewire. Epochs [epochs_unsup_done, n_epochs_unsup) are
// run, so a loaded checkpoint resumes where it stopped. stop_after > 0
// caps the number of epochs run by this call (an interruption point; the
// schedule itself stays defined by the config).
UnsupMetrics run_unsupervised(Model& model, const Dataset& data,
                              std::span<const uint32_t> train_idx, int threads = 1,
                              const FlipObserver& observer = {}, uint32_t stop_after = 0);

struct SupMetrics {
    CsvWriter csv{"epoch,train_errors,val_accuracy"};
    std::vector<double> val_accuracy_per_epoch;
};

// Freezes the input->hidden projection, creates the classifier on first
// entry, then runs error-gated read-out training with per-epoch validation
// accuracy (computed with learning disabled).
SupMetrics run_supervised(Model& model, const Dataset& data, std::span<const uint32_t> train_idx,
                          std::span<const uint32_t> val_idx, int threads = 1,
                          uint32_t stop_after = 0);

// Fraction of argmax-correct predictions; read-only.
double evaluate_accuracy(const Model& model, const Dataset& data, std::span<const uint32_t> idx,
                         int threads = 1);

struct EvalResult {
    double accuracy = 0.0;
    Histogram marginal_entropy;    // over hidden HCs
    Histogram conditional_entropy; // over (sample, HC) pairs
    CsvWriter summary{"metric,value"};
};

EvalResult evaluate(const Model& model, const Dataset& data, std::span<const uint32_t> idx,
                    int threads = 1);

// Per hidden HC: a dark-on-white footprint of its mask over the image
// grid, plus grayscale maps of the on-pixel weights into its first
// max_mcs minicolumns (rescaled to [0,255] over masked pixels; unmasked
// pixels render black). Requires a square image layout.
void dump_receptive_fields(Model& model, const std::string& out_dir, uint32_t max_mcs = 9);

} // namespace bcpnn
