#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcpnn/classifier.hpp"

namespace bcpnn {

// Training hyperparameters. Time constants are multipliers: the effective
// tau_p of a phase is tau_p_mult * n_train * n_epochs * dt, with one sample
// presentation advancing simulation time by dt (likewise tau_k with
// tau_k_mult), so the averaging window is a fixed fraction of the run.
struct TrainConfig {
    double dt = 0.01;
    double gamma = 1.0;
    double k_half = -100.0;
    double tau_p_mult = 0.5;
    double tau_k_mult = 0.1;
    double p_mask = 0.1;
    double eps_prob = 1e-8;
    uint32_t n_train = 50000;
    uint32_t n_val = 10000;
    uint32_t n_epochs_unsup = 5;
    uint32_t n_epochs_sup = 25;
    uint32_t hidden_hcs = 30;
    uint32_t hidden_mcs = 100;
    uint32_t n_flips = 16;
    uint32_t flip_interval = 100;
    uint64_t seed = 1;
    ClassifierMode classifier_mode = ClassifierMode::GoPlusNoGo;

    bool operator==(const TrainConfig&) const = default;

    double tau_p_unsup() const { return tau_p_mult * n_train * n_epochs_unsup * dt; }
    double tau_k_unsup() const { return tau_k_mult * n_train * n_epochs_unsup * dt; }
    double tau_p_sup() const { return tau_p_mult * n_train * n_epochs_sup * dt; }
};

// Flat "key = value" file, '#' comments, unknown keys rejected.
TrainConfig parse_config_file(const std::string& path);
TrainConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

// "key=value" override, same key set as the file format.
void apply_override(TrainConfig& cfg, const std::string& assignment);

// Euler stability and range checks; throws ConfigError. Run once at
// startup, before any training step.
void validate(const TrainConfig& cfg);

// Canonical serialization: fixed key order, shortest round-trip doubles.
// Used for the checkpoint config echo, so it must be deterministic.
std::string serialize(const TrainConfig& cfg);

// "key=value (default <v>)" for every key that differs from the defaults;
// printed in the run header.
std::vector<std::string> deviations_from_defaults(const TrainConfig& cfg);

} // namespace bcpnn
