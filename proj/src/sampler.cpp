#include "lacewalk/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "detail/parallel.hpp"

namespace lacewalk {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Start of stream i: the i-th output of a splitmix64 generator keyed by the
/// seed, so streams begin at unrelated points of the 2^64 cycle.
std::uint64_t stream_start(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t key = seed;
  std::uint64_t state = splitmix64(key) + i * 0x9e3779b97f4a7c15ull;
  return splitmix64(state);
}

double uniform01(std::uint64_t& state) { return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53; }

struct Moments {
  double w = 0.0;
  double w2 = 0.0;
  double wr2 = 0.0;
  std::uint64_t nonzero = 0;

  Moments& operator+=(const Moments& o) {
    w += o.w;
    w2 += o.w2;
    wr2 += o.wr2;
    nonzero += o.nonzero;
    return *this;
  }
};

constexpr std::uint64_t kBlock = 1024;

}  // namespace

SampleBatch sample_walks(int n, std::uint64_t count, std::uint64_t seed, const StepDistribution& D,
                         const Potential& U, unsigned threads) {
  if (n < 0) throw std::invalid_argument("step count must be >= 0");
  if (count < 1) throw std::invalid_argument("sample count must be >= 1");
  const int dim = D.dim();
  std::vector<double> cdf;
  double run = 0.0;
  for (const auto& e : D.entries()) cdf.push_back(run += e.weight);
  const double contact = U.pair_factor<double>(1);

  const std::uint64_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<Moments> partial(blocks);
  detail::for_each_task(blocks, threads, [&](std::size_t b) {
    std::vector<int> path(static_cast<std::size_t>((n + 1) * dim), 0);
    Moments m;
    const std::uint64_t end = std::min(count, (b + 1) * kBlock);
    for (std::uint64_t i = b * kBlock; i < end; ++i) {
      std::uint64_t state = stream_start(seed, i);
      double weight = 1.0;
      for (int t = 1; t <= n && weight != 0.0; ++t) {
        const double u = uniform01(state) * run;
        std::size_t pick = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        pick = std::min(pick, cdf.size() - 1);
        const auto& off = D.entries()[pick].offset;
        int* x = path.data() + static_cast<std::size_t>(t * dim);
        const int* prev = x - dim;
        for (int k = 0; k < dim; ++k) x[k] = prev[k] + off[k];
        if (!U.interacting()) continue;
        for (int s = 0; s < t; ++s) {
          const int* y = path.data() + static_cast<std::size_t>(s * dim);
          std::int64_t r2 = 0;
          for (int k = 0; k < dim; ++k) r2 += static_cast<std::int64_t>(x[k] - y[k]) * (x[k] - y[k]);
          if (r2 == 0) {
            weight = 0.0;
            break;
          }
          if (r2 == 1) weight *= contact;
        }
      }
      if (weight == 0.0) continue;
      const int* end_site = path.data() + static_cast<std::size_t>(n * dim);
      double r2 = 0.0;
      for (int k = 0; k < dim; ++k) r2 += static_cast<double>(end_site[k]) * end_site[k];
      m.w += weight;
      m.w2 += weight * weight;
      m.wr2 += weight * r2;
      ++m.nonzero;
    }
    partial[b] = m;
  });

  // pairwise reduction over blocks in index order
  for (std::size_t width = 1; width < partial.size(); width *= 2) {
    for (std::size_t i = 0; i + width < partial.size(); i += 2 * width) partial[i] += partial[i + width];
  }
  const Moments& total = partial.front();

  SampleBatch out;
  out.n = n;
  out.count = count;
  out.seed = seed;
  out.nonzero = total.nonzero;
  const double N = static_cast<double>(count);
  out.cn_estimate = total.w / N;
  if (count > 1) {
    const double var = std::max(0.0, (total.w2 - N * out.cn_estimate * out.cn_estimate) / (N - 1));
    out.cn_std_error = std::sqrt(var / N);
  }
  out.msd_estimate = total.w > 0.0 ? total.wr2 / total.w : 0.0;
  return out;
}

}  // namespace lacewalk
