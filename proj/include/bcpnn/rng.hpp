#pragma once

#include <cstdint>
#include <vector>

namespace bcpnn {

// splitmix64 (Steele, Lea, Flood 2014). One 64-bit word of state, so it
// serializes trivially and behaves identically on every platform. All
// stochastic choices in the library (splits, mask init, trace noise,
// epoch shuffles) draw from instances of this generator in a documented
// order; std::random distributions are avoided because their output is
// implementation-defined.
class Rng {
public:
    explicit Rng(uint64_t seed = 0) : state_(seed) {}

    // Independent stream derived from (seed, stream_id). Stream 0 is the
    // dataset split, stream 1 the model/training stream.
    static Rng stream(uint64_t seed, uint64_t stream_id) {
        Rng r(seed ^ (0x9E3779B97F4A7C15ULL * (stream_id + 1)));
        r.next_u64(); // decorrelate nearby seeds
        return r;
    }

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Unbiased integer in [0, n). n must be > 0.
    uint64_t below(uint64_t n) {
        const uint64_t limit = n * ((~uint64_t{0}) / n); // largest multiple of n
        uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return r % n;
    }

    // Fisher-Yates, descending index.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t k = v.size(); k > 1; --k) {
            size_t j = static_cast<size_t>(below(k));
            std::swap(v[k - 1], v[j]);
        }
    }

    uint64_t state() const { return state_; }
    void set_state(uint64_t s) { state_ = s; }

private:
    uint64_t state_;
};

} // namespace bcpnn
