// Writes a synthetic digit corpus in the standard MNIST IDX layout, for
// use when the real dataset is not on hand:
//   bcpnn-synthgen --out data/ --n-train 6000 --n-test 1000 --seed 7
#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "bcpnn/datagen.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"synthetic digit corpus generator (IDX output)"};
    std::string out_dir = "data";
    uint32_t n_train = 6000, n_test = 1000;
    uint64_t seed = 7;
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--n-train", n_train, "training samples");
    app.add_option("--n-test", n_test, "test samples");
    app.add_option("--seed", seed, "generator seed");
    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(out_dir);
        bcpnn::Dataset train = bcpnn::synth_digits(n_train, seed);
        bcpnn::Dataset test = bcpnn::synth_digits(n_test, seed + 1);
        bcpnn::write_idx(train, (fs::path(out_dir) / "train-images-idx3-ubyte").string(),
                         (fs::path(out_dir) / "train-labels-idx1-ubyte").string());
        bcpnn::write_idx(test, (fs::path(out_dir) / "t10k-images-idx3-ubyte").string(),
                         (fs::path(out_dir) / "t10k-labels-idx1-ubyte").string());
        std::cout << "wrote " << n_train << " train and " << n_test << " test samples to "
                  << out_dir << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
