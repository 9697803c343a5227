#include "bcpnn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "bcpnn/parallel.hpp"
#include "bcpnn/pgm.hpp"

namespace bcpnn {

namespace {

Activity encode_index(const Dataset& data, uint32_t idx, std::vector<double>& scratch) {
    scratch.resize(data.pixels_per_image());
    data.intensities(idx, scratch);
    return encode_sample(scratch);
}

void append_flips(CsvWriter& csv, uint64_t event, const std::vector<FlipRecord>& records) {
    for (const FlipRecord& f : records) {
        csv.row(std::to_string(event) + "," + std::to_string(f.hidden_hc) + "," +
                std::to_string(f.removed_src) + "," + std::to_string(f.added_src) + "," +
                csv_double(f.ihat_removed) + "," + csv_double(f.ihat_added));
    }
}

} // namespace

UnsupMetrics run_unsupervised(Model& model, const Dataset& data,
                              std::span<const uint32_t> train_idx, int threads,
                              const FlipObserver& observer, uint32_t stop_after) {
    const TrainConfig& cfg = model.cfg;
    UnsupMetrics metrics;
    if (model.epochs_unsup_done >= cfg.n_epochs_unsup) return metrics;

    const uint32_t last_epoch = stop_after > 0
                                    ? std::min(cfg.n_epochs_unsup, model.epochs_unsup_done + stop_after)
                                    : cfg.n_epochs_unsup;
    model.ih.traces.k_p = 1.0;
    std::vector<double> scratch;
    std::vector<uint32_t> order(train_idx.begin(), train_idx.end());

    for (uint32_t epoch = model.epochs_unsup_done; epoch < last_epoch; ++epoch) {
        order.assign(train_idx.begin(), train_idx.end());
        model.rng.shuffle(order);

        for (uint32_t idx : order) {
            Activity x = encode_index(data, idx, scratch);
            model.sync_ih_active(threads);
            Activity z;
            try {
                z = infer(x, model.ih, cfg.gamma, threads);
            } catch (const NumericError& e) {
                throw NumericError(std::string(e.what()) + " (sample " + std::to_string(idx) +
                                   ", presentation " + std::to_string(model.samples_seen) + ")");
            }
            update_traces(model.ih.traces, x, z, cfg.dt, threads);
            update_bias_gain(model.regulator, model.ih.traces.p_tgt, cfg.dt);
            model.ih.bias_gain = model.regulator.k_beta;

            model.samples_seen += 1;
            if (model.samples_seen % model.structural.flip_interval == 0) {
                const uint64_t event = model.samples_seen / model.structural.flip_interval;
                std::vector<double> mi = mutual_information(model.ih, cfg.eps_prob, threads);
                std::vector<double> ihat =
                    normalized_mi(mi, model.ih.mask(), model.input.n_hc, model.hidden.n_hc);
                std::vector<FlipRecord> flips = flip_connections(model.ih, model.structural, ihat);
                append_flips(metrics.flips_csv, event, flips);
                if (observer) observer(event, flips, model);
            }
        }

        const std::vector<double> ent = marginal_entropies(model.ih.traces);
        double mean = 0.0;
        for (uint32_t j = 0; j < ent.size(); ++j) {
            metrics.entropy_csv.row(std::to_string(epoch) + "," + std::to_string(j) + "," +
                                    csv_double(ent[j]));
            mean += ent[j];
        }
        metrics.mean_entropy_per_epoch.push_back(mean / double(ent.size()));
        model.epochs_unsup_done = epoch + 1;
    }
    return metrics;
}

SupMetrics run_supervised(Model& model, const Dataset& data, std::span<const uint32_t> train_idx,
                          std::span<const uint32_t> val_idx, int threads, uint32_t stop_after) {
    const TrainConfig& cfg = model.cfg;
    SupMetrics metrics;

    // Freeze the representation: no trace or gain updates from here on.
    model.ih.traces.k_p = 0.0;
    model.sync_ih_active(threads);

    if (!model.clf) {
        const double tau = cfg.n_epochs_sup > 0 ? cfg.tau_p_sup() : 1.0;
        model.clf = GoNoGoClassifier::make(model.hidden, model.output, cfg.classifier_mode, tau);
        model.clf->go.sync_parameters(cfg.eps_prob);
        model.clf->nogo.sync_parameters(cfg.eps_prob);
    }
    if (model.epochs_sup_done >= cfg.n_epochs_sup) return metrics;

    const uint32_t last_epoch = stop_after > 0
                                    ? std::min(cfg.n_epochs_sup, model.epochs_sup_done + stop_after)
                                    : cfg.n_epochs_sup;
    std::vector<double> scratch;
    std::vector<uint32_t> order;
    for (uint32_t epoch = model.epochs_sup_done; epoch < last_epoch; ++epoch) {
        order.assign(train_idx.begin(), train_idx.end());
        model.rng.shuffle(order);

        uint64_t errors = 0;
        for (uint32_t idx : order) {
            try {
                Activity x = encode_index(data, idx, scratch);
                Activity z = infer(x, model.ih, cfg.gamma, threads);
                if (train_step(z, data.labels[idx], *model.clf, cfg.dt, cfg.gamma, cfg.eps_prob))
                    errors += 1;
            } catch (const NumericError& e) {
                throw NumericError(std::string(e.what()) + " (sample " + std::to_string(idx) + ")");
            }
        }

        const double acc = evaluate_accuracy(model, data, val_idx, threads);
        metrics.csv.row(std::to_string(epoch) + "," + std::to_string(errors) + "," +
                        csv_double(acc));
        metrics.val_accuracy_per_epoch.push_back(acc);
        model.epochs_sup_done = epoch + 1;
    }
    return metrics;
}

double evaluate_accuracy(const Model& model, const Dataset& data, std::span<const uint32_t> idx,
                         int threads) {
    if (!model.clf) throw DataError("evaluate: model has no trained classifier");
    if (idx.empty()) return 0.0;

    std::vector<uint8_t> correct(idx.size(), 0);
    parallel_for(idx.size(), threads, [&](size_t begin, size_t end) {
        std::vector<double> scratch;
        for (size_t k = begin; k < end; ++k) {
            Activity x = encode_index(data, idx[k], scratch);
            Activity z = infer(x, model.ih, model.cfg.gamma);
            Prediction p = predict(z, *model.clf, model.cfg.gamma);
            correct[k] = (p.label == data.labels[idx[k]]) ? 1 : 0;
        }
    });
    uint64_t hits = 0;
    for (uint8_t c : correct) hits += c;
    return double(hits) / double(idx.size());
}

EvalResult evaluate(const Model& model, const Dataset& data, std::span<const uint32_t> idx,
                    int threads) {
    if (!model.clf) throw DataError("evaluate: model has no trained classifier");
    const double h_max = std::log(double(model.hidden.mc_per_hc));
    const size_t bins = 50;
    EvalResult result{0.0, Histogram(0.0, h_max, bins), Histogram(0.0, h_max, bins),
                      CsvWriter("metric,value")};

    std::vector<uint8_t> correct(idx.size(), 0);
    std::vector<double> cond_entropy(idx.size() * model.hidden.n_hc, 0.0);
    parallel_for(idx.size(), threads, [&](size_t begin, size_t end) {
        std::vector<double> scratch;
        for (size_t k = begin; k < end; ++k) {
            Activity x = encode_index(data, idx[k], scratch);
            Activity z = infer(x, model.ih, model.cfg.gamma);
            Prediction p = predict(z, *model.clf, model.cfg.gamma);
            correct[k] = (p.label == data.labels[idx[k]]) ? 1 : 0;
            for (uint32_t j = 0; j < model.hidden.n_hc; ++j)
                cond_entropy[k * model.hidden.n_hc + j] = entropy_nats(z.hc_span(j));
        }
    });

    uint64_t hits = 0;
    for (uint8_t c : correct) hits += c;
    result.accuracy = idx.empty() ? 0.0 : double(hits) / double(idx.size());
    for (double h : cond_entropy) result.conditional_entropy.add(h);
    for (double h : marginal_entropies(model.ih.traces)) result.marginal_entropy.add(h);

    result.summary.row("accuracy," + csv_double(result.accuracy));
    result.summary.row("samples," + std::to_string(idx.size()));
    return result;
}

void dump_receptive_fields(Model& model, const std::string& out_dir, uint32_t max_mcs) {
    const uint32_t n_px = model.input.n_hc;
    const uint32_t side = uint32_t(std::lround(std::sqrt(double(n_px))));
    if (side * side != n_px)
        throw DataError("dump_receptive_fields: input layer of " + std::to_string(n_px) +
                        " HCs is not a square image");
    std::filesystem::create_directories(out_dir);
    model.sync_ih_active(1);

    const uint32_t m_tgt = model.hidden.mc_per_hc;
    std::vector<uint8_t> gray(n_px);
    char name[64];
    for (uint32_t j = 0; j < model.hidden.n_hc; ++j) {
        for (uint32_t i = 0; i < n_px; ++i) gray[i] = model.ih.masked(i, j) ? 0 : 255;
        std::snprintf(name, sizeof(name), "rf_hc%03u_mask.pgm", j);
        write_pgm((std::filesystem::path(out_dir) / name).string(), side, side, gray);

        for (uint32_t b = 0; b < std::min(max_mcs, m_tgt); ++b) {
            // weight from each pixel's on-MC (index 0) into (j, b)
            double lo = std::numeric_limits<double>::infinity();
            double hi = -std::numeric_limits<double>::infinity();
            std::vector<double> w(n_px, 0.0);
            for (uint32_t i = 0; i < n_px; ++i) {
                if (!model.ih.masked(i, j)) continue;
                w[i] = model.ih.weights[model.ih.traces.joint_index(i, j, 0, b)];
                lo = std::min(lo, w[i]);
                hi = std::max(hi, w[i]);
            }
            for (uint32_t i = 0; i < n_px; ++i) {
                if (!model.ih.masked(i, j)) {
                    gray[i] = 0;
                } else if (hi > lo) {
                    gray[i] = uint8_t(std::lround(255.0 * (w[i] - lo) / (hi - lo)));
                } else {
                    gray[i] = 255;
                }
            }
            std::snprintf(name, sizeof(name), "rf_hc%03u_mc%03u.pgm", j, b);
            write_pgm((std::filesystem::path(out_dir) / name).string(), side, side, gray);
        }
    }
}

} // namespace bcpnn
