#pragma once

#include <cstdint>
#include <string>

#include "lacewalk/model.hpp"

namespace lacewalk {

/// Name recorded in sampler output metadata.
inline constexpr const char* kSamplerAlgorithm = "rosenbluth-proposal-D/splitmix64-per-sample";

struct SampleBatch {
  int n = 0;
  std::uint64_t count = 0;
  std::uint64_t seed = 0;
  /// mean walk weight, an unbiased estimate of c_n
  double cn_estimate = 0.0;
  /// sample standard deviation of the weights over sqrt(count)
  double cn_std_error = 0.0;
  /// weight-averaged |w_n|^2; 0 when every weight vanished
  double msd_estimate = 0.0;
  /// samples with nonzero weight
  std::uint64_t nonzero = 0;
  std::string algorithm = kSamplerAlgorithm;
};

/// Grows `count` walks of n steps with steps drawn from D and carries the
/// pair product prod_{s<t} (1 - U(w_s - w_t)) as the sample weight. Sample i
/// uses its own stream seeded from (seed, i), and sums are reduced over fixed
/// index blocks, so the result does not depend on `threads`.
SampleBatch sample_walks(int n, std::uint64_t count, std::uint64_t seed, const StepDistribution& D,
                         const Potential& U, unsigned threads = 1);

}  // namespace lacewalk
