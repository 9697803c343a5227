#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "bcpnn/checkpoint.hpp"
#include "bcpnn/trainer.hpp"

namespace fs = std::filesystem;
using namespace bcpnn;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string mnist_dir;
    std::string checkpoint_path;
    std::string out_dir = ".";
    std::optional<uint64_t> seed;
    std::vector<std::string> overrides;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "config file, flat key = value lines");
    cmd->add_option("--mnist-dir", o.mnist_dir, "directory with the four IDX files");
    cmd->add_option("--checkpoint", o.checkpoint_path, "model state file");
    cmd->add_option("--out", o.out_dir, "output directory for metrics and artifacts");
    cmd->add_option("--seed", o.seed, "RNG seed (overrides the config)");
    cmd->add_option("--set", o.overrides, "key=value override, repeatable")->take_all();
    cmd->add_option("--threads", o.threads, "worker threads; 1 is bit-exact")
        ->check(CLI::PositiveNumber);
}

TrainConfig build_config(const CommonOpts& o) {
    TrainConfig cfg = o.config_path.empty() ? TrainConfig{} : parse_config_file(o.config_path);
    for (const std::string& kv : o.overrides) apply_override(cfg, kv);
    if (o.seed) cfg.seed = *o.seed;
    validate(cfg);
    return cfg;
}

void print_run_header(const TrainConfig& cfg) {
    std::cout << "# seed " << cfg.seed << "\n";
    for (const std::string& dev : deviations_from_defaults(cfg))
        std::cout << "# non-default " << dev << "\n";
}

MnistDir load_data(const CommonOpts& o) {
    if (o.mnist_dir.empty()) throw ConfigError("--mnist-dir is required for this command");
    return load_mnist_dir(o.mnist_dir);
}

std::string checkpoint_path(const CommonOpts& o) {
    if (!o.checkpoint_path.empty()) return o.checkpoint_path;
    return (fs::path(o.out_dir) / "model.ckpt").string();
}

// The (seed, n_train, n_val) triple defines the train/validation split;
// changing it against an existing checkpoint would mix held-out samples
// into training.
void ensure_split_compatible(const TrainConfig& from_ckpt, const TrainConfig& now) {
    if (from_ckpt.seed != now.seed || from_ckpt.n_train != now.n_train ||
        from_ckpt.n_val != now.n_val)
        throw ConfigError("seed/n_train/n_val must match the checkpoint (checkpoint has seed=" +
                          std::to_string(from_ckpt.seed) + ", n_train=" +
                          std::to_string(from_ckpt.n_train) + ", n_val=" +
                          std::to_string(from_ckpt.n_val) + ")");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out.write(text.data(), std::streamsize(text.size()));
}

int cmd_train_unsup(const CommonOpts& o) {
    const TrainConfig cfg = build_config(o);
    fs::create_directories(o.out_dir);
    const MnistDir data = load_data(o);
    const DatasetSplit split = split_dataset(data.train, cfg.n_train, cfg.n_val, cfg.seed);

    const std::string ckpt = checkpoint_path(o);
    Model model = fs::exists(ckpt) ? load_checkpoint(ckpt)
                                   : Model::init(cfg, input_layer_for(data.train));
    if (fs::exists(ckpt)) {
        if (model.hidden.n_hc != cfg.hidden_hcs || model.hidden.mc_per_hc != cfg.hidden_mcs)
            throw DimensionError("checkpoint hidden layer " + std::to_string(model.hidden.n_hc) +
                                 "x" + std::to_string(model.hidden.mc_per_hc) +
                                 " does not match configured " + std::to_string(cfg.hidden_hcs) +
                                 "x" + std::to_string(cfg.hidden_mcs));
        ensure_split_compatible(model.cfg, cfg);
        model.cfg = cfg; // resume under the (possibly extended) config
        model.structural.n_flips = cfg.n_flips;
        model.structural.flip_interval = cfg.flip_interval;
        std::cout << "# resuming from " << ckpt << " at unsup epoch " << model.epochs_unsup_done
                  << "\n";
    }
    print_run_header(cfg);

    // checkpoint after every epoch so an interrupted run resumes at the
    // last epoch boundary
    UnsupMetrics metrics;
    while (model.epochs_unsup_done < cfg.n_epochs_unsup) {
        UnsupMetrics seg = run_unsupervised(model, data.train, split.train, o.threads, {}, 1);
        metrics.entropy_csv.append_rows(seg.entropy_csv);
        metrics.flips_csv.append_rows(seg.flips_csv);
        for (double m : seg.mean_entropy_per_epoch) {
            std::cout << "epoch " << (model.epochs_unsup_done - 1) << " mean marginal entropy "
                      << csv_double(m) << " nats\n";
            metrics.mean_entropy_per_epoch.push_back(m);
        }
        save_checkpoint(model, ckpt);
    }
    metrics.entropy_csv.write_file((fs::path(o.out_dir) / "unsup_entropy.csv").string());
    metrics.flips_csv.write_file((fs::path(o.out_dir) / "flips.csv").string());
    save_checkpoint(model, ckpt);
    std::cout << "checkpoint written to " << ckpt << "\n";
    return 0;
}

int cmd_train_sup(const CommonOpts& o) {
    const CommonOpts& opts = o;
    const MnistDir data = load_data(opts);
    fs::create_directories(opts.out_dir);

    const std::string ckpt = checkpoint_path(opts);
    if (!fs::exists(ckpt))
        throw DataError("train-sup needs an unsupervised checkpoint; '" + ckpt + "' not found");
    Model model = load_checkpoint(ckpt);

    TrainConfig cfg = model.cfg;
    if (!opts.config_path.empty()) cfg = parse_config_file(opts.config_path);
    for (const std::string& kv : opts.overrides) apply_override(cfg, kv);
    if (opts.seed) cfg.seed = *opts.seed;
    validate(cfg);
    if (model.hidden.n_hc != cfg.hidden_hcs || model.hidden.mc_per_hc != cfg.hidden_mcs)
        throw DimensionError("checkpoint hidden layer does not match configured dimensions");
    ensure_split_compatible(model.cfg, cfg);
    model.cfg = cfg;
    print_run_header(cfg);

    const DatasetSplit split = split_dataset(data.train, cfg.n_train, cfg.n_val, cfg.seed);
    SupMetrics metrics;
    do {
        SupMetrics seg =
            run_supervised(model, data.train, split.train, split.validation, opts.threads, 1);
        metrics.csv.append_rows(seg.csv);
        for (double a : seg.val_accuracy_per_epoch) metrics.val_accuracy_per_epoch.push_back(a);
        save_checkpoint(model, ckpt);
    } while (model.epochs_sup_done < cfg.n_epochs_sup);
    metrics.csv.write_file((fs::path(opts.out_dir) / "sup_metrics.csv").string());

    if (!metrics.val_accuracy_per_epoch.empty())
        std::cout << "final validation accuracy "
                  << csv_double(metrics.val_accuracy_per_epoch.back()) << "\n";
    std::cout << "checkpoint written to " << ckpt << "\n";
    return 0;
}

int cmd_eval(const CommonOpts& o, const std::string& split_name) {
    const MnistDir data = load_data(o);
    fs::create_directories(o.out_dir);
    Model model = load_checkpoint(checkpoint_path(o));
    const TrainConfig from_ckpt = model.cfg;
    for (const std::string& kv : o.overrides) apply_override(model.cfg, kv);
    if (o.seed) model.cfg.seed = *o.seed;
    validate(model.cfg);
    ensure_split_compatible(from_ckpt, model.cfg);
    print_run_header(model.cfg);

    std::vector<uint32_t> idx;
    const Dataset* set = nullptr;
    if (split_name == "test") {
        set = &data.test;
        idx.resize(data.test.size());
        for (uint32_t k = 0; k < idx.size(); ++k) idx[k] = k;
    } else {
        set = &data.train;
        idx = split_dataset(data.train, model.cfg.n_train, model.cfg.n_val, model.cfg.seed)
                  .validation;
    }

    model.sync_ih_active(o.threads);
    EvalResult result = evaluate(model, *set, idx, o.threads);
    result.summary.write_file((fs::path(o.out_dir) / "eval_summary.csv").string());
    write_text((fs::path(o.out_dir) / "marginal_entropy_hist.csv").string(),
               result.marginal_entropy.to_csv());
    write_text((fs::path(o.out_dir) / "conditional_entropy_hist.csv").string(),
               result.conditional_entropy.to_csv());

    std::cout << split_name << " accuracy " << csv_double(result.accuracy) << " over "
              << idx.size() << " samples\n";
    return 0;
}

int cmd_dump_rf(const CommonOpts& o) {
    Model model = load_checkpoint(checkpoint_path(o));
    dump_receptive_fields(model, o.out_dir);
    std::cout << "receptive fields written to " << o.out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"BCPNN unsupervised representation learning harness"};
    app.require_subcommand(1);

    CommonOpts unsup_o, sup_o, eval_o, rf_o;
    std::string eval_split = "val";

    CLI::App* unsup = app.add_subcommand("train-unsup", "unsupervised representation learning");
    add_common(unsup, unsup_o);
    CLI::App* sup = app.add_subcommand("train-sup", "error-gated read-out training");
    add_common(sup, sup_o);
    CLI::App* ev = app.add_subcommand("eval", "accuracy and entropy diagnostics");
    add_common(ev, eval_o);
    ev->add_option("--split", eval_split, "val or test")
        ->check(CLI::IsMember({"val", "test"}));
    CLI::App* rf = app.add_subcommand("dump-rf", "receptive-field images");
    add_common(rf, rf_o);

    try {
        app.parse(argc, argv);
        if (unsup->parsed()) return cmd_train_unsup(unsup_o);
        if (sup->parsed()) return cmd_train_sup(sup_o);
        if (ev->parsed()) return cmd_eval(eval_o, eval_split);
        if (rf->parsed()) return cmd_dump_rf(rf_o);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
