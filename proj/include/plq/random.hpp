#pragma once

#include <random>

#include "plq/local_operator.hpp"

namespace plq {

/// Seeded random draws used for "generic" choices. Every consumer records the
/// seed it used so runs are reproducible.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::mt19937_64& engine() { return eng_; }

    double gauss() { return normal_(eng_); }
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(eng_);
    }
    long uniform_int(long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(eng_);
    }
    std::uint64_t child_seed() { return eng_(); }

    /// Complex Ginibre matrix, entries (g + i g)/sqrt(2).
    Mat ginibre(long rows, long cols);
    /// GUE-normalized random Hermitian matrix.
    Mat hermitian(long dim);
    /// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
    Mat haar_unitary(long dim);
    /// Random PSD matrix with exactly `kernel_dim` zero eigenvalues and the
    /// rest drawn from |N(0,1)| + floor.
    Mat psd_with_kernel(long dim, long kernel_dim, double floor = 0.05);

  private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace plq
