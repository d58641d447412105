#pragma once

#include <cstdint>
#include <random>

namespace mrsim {

/// Mixes a base seed with a stream id into an independent child seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream_id);

/// Deterministic standard-normal stream.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed = 0) : engine_(seed) {}

    double next() { return normal_(engine_); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Additive sensor noise: white Gaussian term plus an integrated random-walk
/// bias, b_{k+1} = b_k + sigma_walk * sqrt(dt) * n_k. Owns its RNG stream, so
/// sequences are reproducible per seed.
class NoiseProcess {
public:
    NoiseProcess() = default;
    NoiseProcess(double sigma_white, double sigma_walk, std::uint64_t seed)
        : sigma_white_(sigma_white), sigma_walk_(sigma_walk), stream_(seed) {}

    /// Advances the bias by one interval of length dt and returns the total
    /// perturbation (bias + white sample).
    double sample(double dt) {
        advance_bias(dt);
        return bias_ + white();
    }

    /// White component only; does not touch the bias state.
    double white() { return sigma_white_ * stream_.next(); }

    void advance_bias(double dt) {
        if (sigma_walk_ != 0.0) bias_ += sigma_walk_ * std::sqrt(dt) * stream_.next();
    }

    double bias() const { return bias_; }
    double sigma_white() const { return sigma_white_; }

private:
    double sigma_white_{0.0};
    double sigma_walk_{0.0};
    double bias_{0.0};
    GaussianStream stream_;
};

} // namespace mrsim
