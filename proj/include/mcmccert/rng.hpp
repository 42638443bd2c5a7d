#pragma once

#include <cstdint>
#include <random>

namespace mcmccert {

// SplitMix64: used to derive independent stream seeds from one master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derive the seed for stream `index` from a master seed: the index-th output
// of the SplitMix64 sequence seeded at master, computed in O(1) by jumping the
// state directly to its linear position.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master + index * 0x9e3779b97f4a7c15ULL;
    return splitmix64(s);
}

// Thin wrapper around mt19937_64 with the distributions the toolkit needs.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return unif_(gen_); }
    double normal() { return norm_(gen_); }
    double normal(double mean, double sd) { return mean + sd * norm_(gen_); }
    // Gamma with shape/rate parameterization.
    double gamma(double shape, double rate) {
        std::gamma_distribution<double> d(shape, 1.0 / rate);
        return d(gen_);
    }
    bool bernoulli(double p) { return unif_(gen_) < p; }
    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        std::uniform_int_distribution<std::uint64_t> d(0, n - 1);
        return d(gen_);
    }

    std::mt19937_64& engine() { return gen_; }

  private:
    std::mt19937_64 gen_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    std::normal_distribution<double> norm_{0.0, 1.0};
};

}  // namespace mcmccert
