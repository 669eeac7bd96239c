#include "matchmarket/affinity.hpp"

#include <cmath>
#include <string>

#include "matchmarket/errors.hpp"

namespace matchmarket {

AffinityMatrix build_affinity(int n, const DistributionSpec& offdiag, const DistributionSpec& diag,
                              const RngStream& rng, AffinityStorage storage,
                              std::uint64_t dense_limit_bytes) {
  if (n < 2) {
    throw ConfigError("invalid population: need at least 2 agents, got " + std::to_string(n));
  }
  offdiag.validate();
  diag.validate();

  AffinityMatrix a;
  a.n_ = n;
  a.offdiag_ = offdiag;
  a.diag_ = diag;
  a.gen_offdiag_ = offdiag;
  a.gen_diag_ = diag;
  a.key_ = rng.substream("affinity-entries").key();

  const std::uint64_t bytes = static_cast<std::uint64_t>(n) * n * sizeof(double);
  const bool use_dense = storage == AffinityStorage::Dense ||
                         (storage == AffinityStorage::Auto && bytes <= dense_limit_bytes);
  if (use_dense) {
    a.values_.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        a.values_[static_cast<std::size_t>(i) * n + j] = a.raw_at(i, j);
      }
    }
  }
  return a;
}

AffinityMatrix AffinityMatrix::from_values(int n, std::vector<double> values,
                                           DistributionSpec offdiag, DistributionSpec diag) {
  if (n < 2) throw ConfigError("invalid population: need at least 2 agents");
  if (values.size() != static_cast<std::size_t>(n) * n) {
    throw ConfigError("from_values: expected n*n values");
  }
  AffinityMatrix a;
  a.n_ = n;
  a.offdiag_ = offdiag;
  a.diag_ = diag;
  a.gen_offdiag_ = offdiag;
  a.gen_diag_ = diag;
  a.values_ = std::move(values);
  return a;
}

AffinityMatrix affine_map(const AffinityMatrix& a, double scale, double shift) {
  if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(shift)) {
    throw ConfigError("invalid transform: affine_map needs finite scale > 0 and finite shift");
  }
  AffinityMatrix out = a;
  out.offdiag_ = a.offdiag_.affine(scale, shift);
  out.diag_ = a.diag_.affine(scale, shift);
  if (out.dense()) {
    for (double& v : out.values_) v = scale * v + shift;
  } else {
    // The lazy backend applies the ops one by one in order, matching the
    // rounding of the dense path exactly.
    out.affine_ops_.emplace_back(scale, shift);
  }
  return out;
}

}  // namespace matchmarket
