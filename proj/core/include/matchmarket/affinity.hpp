#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "matchmarket/distribution.hpp"
#include "matchmarket/rng.hpp"

namespace matchmarket {

enum class AffinityStorage { Auto, Dense, Lazy };

/// N x N affinity table. A(i, j) is agent i's utility in a couple with j;
/// A(k, k) its utility when single. Entries are a pure function of
/// (seed, i, j), so two backends exist behind the same interface: a dense
/// row-major array and a lazy one that regenerates entries on access (the
/// memory-budget path for N where N^2 doubles do not fit). Both produce
/// identical values. Immutable once built.
class AffinityMatrix {
 public:
  static constexpr std::uint64_t kDefaultDenseLimit = 256ULL << 20;  // bytes

  int n() const noexcept { return n_; }
  bool dense() const noexcept { return !values_.empty(); }

  double at(int i, int j) const noexcept {
    if (dense()) return values_[static_cast<std::size_t>(i) * n_ + j];
    double v = raw_at(i, j);
    for (const auto& [scale, shift] : affine_ops_) v = scale * v + shift;
    return v;
  }

  const DistributionSpec& offdiag_spec() const noexcept { return offdiag_; }
  const DistributionSpec& diag_spec() const noexcept { return diag_; }
  std::uint64_t entry_key() const noexcept { return key_; }

  /// Dense matrix from explicit row-major values (hand-built instances).
  static AffinityMatrix from_values(int n, std::vector<double> values,
                                    DistributionSpec offdiag = DistributionSpec::gaussian(0, 1),
                                    DistributionSpec diag = DistributionSpec::gaussian(0, 1));

  friend AffinityMatrix build_affinity(int n, const DistributionSpec& offdiag,
                                       const DistributionSpec& diag, const RngStream& rng,
                                       AffinityStorage storage, std::uint64_t dense_limit_bytes);
  friend AffinityMatrix affine_map(const AffinityMatrix& a, double scale, double shift);

 private:
  AffinityMatrix() = default;

  // Lazy generation always draws from the specs the matrix was built with;
  // affine maps stack on top so both backends round identically.
  double raw_at(int i, int j) const noexcept {
    const std::uint64_t cell = hash_combine(hash_combine(key_, static_cast<std::uint64_t>(i)),
                                            static_cast<std::uint64_t>(j));
    const std::uint64_t w0 = stream_at(cell, 0);
    const std::uint64_t w1 = stream_at(cell, 1);
    return (i == j) ? gen_diag_.sample(w0, w1) : gen_offdiag_.sample(w0, w1);
  }

  int n_ = 0;
  DistributionSpec offdiag_;      // current law, affine maps included
  DistributionSpec diag_;
  DistributionSpec gen_offdiag_;  // law used for entry generation
  DistributionSpec gen_diag_;
  std::uint64_t key_ = 0;
  std::vector<double> values_;                          // dense backend
  std::vector<std::pair<double, double>> affine_ops_;   // lazy backend transform chain
};

/// Populate an affinity matrix from the two generating laws. Deterministic in
/// (n, specs, rng seed). Throws ConfigError for n < 2 or a negative sigma.
AffinityMatrix build_affinity(int n, const DistributionSpec& offdiag, const DistributionSpec& diag,
                              const RngStream& rng, AffinityStorage storage = AffinityStorage::Auto,
                              std::uint64_t dense_limit_bytes = AffinityMatrix::kDefaultDenseLimit);

/// Entry-wise scale*A + shift with the specs remapped accordingly.
/// Throws ConfigError for scale <= 0 (order reversal breaks the dictionary).
AffinityMatrix affine_map(const AffinityMatrix& a, double scale, double shift);

}  // namespace matchmarket
