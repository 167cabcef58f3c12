#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ehrelay/model.hpp"

namespace ehrelay::mc {

// Draws are generated in fixed chunks; chunk k always uses
// RandomStream(seed, k), and per-chunk partial results are merged in chunk
// order, so estimates are bit-identical for any worker count.
inline constexpr std::int64_t kChunkSize = std::int64_t{1} << 16;

inline constexpr std::int64_t kDefaultSamples = 1'000'000;
inline constexpr std::int64_t kTailSamples = 10'000'000;

enum class BetaModel { approximate, exact };

struct McOptions {
  std::int64_t n = kDefaultSamples;
  std::uint64_t seed = 1;
  // 0 = std::thread::hardware_concurrency().
  unsigned workers = 0;
  BetaModel beta = BetaModel::approximate;
};

struct Estimate {
  double mean = 0.0;
  double std_err = 0.0;  // sample standard deviation / sqrt(n)
  std::int64_t n = 0;
  std::uint64_t seed = 0;
};

struct OutageEstimates {
  Estimate system;  // R1 < T1 or R2 < T2
  Estimate first;   // gamma1 < tau1
  Estimate second;  // gamma2 < tau2
  Estimate joint;   // both
};

OutageEstimates estimate_outage_events(const model::SystemParams& params,
                                       const model::TargetRates& targets,
                                       const McOptions& options);

Estimate estimate_outage(const model::SystemParams& params,
                         const model::TargetRates& targets, const McOptions& options);

struct CapacityEstimates {
  Estimate sum;     // R1 + R2
  Estimate first;   // R1
  Estimate second;  // R2
};

CapacityEstimates estimate_capacity_terms(const model::SystemParams& params,
                                          const McOptions& options);

Estimate estimate_capacity(const model::SystemParams& params, const McOptions& options);

/// n draws of Z = a X Y / (b X + c), X ~ Exp(omega1), Y ~ Exp(omega2),
/// sorted ascending.
std::vector<double> sample_z(double a, double b, double c, double omega1, double omega2,
                             const McOptions& options);

struct CdfPoint {
  double z = 0.0;
  double f = 0.0;
};

/// Empirical CDF of Z on an ascending grid.
std::vector<CdfPoint> empirical_cdf_z(double a, double b, double c, double omega1,
                                      double omega2, const std::vector<double>& z_grid,
                                      const McOptions& options);

/// Kolmogorov-Smirnov distance between a sorted sample and a CDF.
double ks_distance(const std::vector<double>& sorted_sample,
                   const std::function<double(double)>& cdf);

struct DiversityEstimate {
  double value = 0.0;
  double std_err = 0.0;
  double outage_low = 0.0;   // P_out at gamma / step
  double outage_high = 0.0;  // P_out at gamma * step
  std::int64_t n = 0;
  std::uint64_t seed = 0;
};

/// Central difference of -ln P_out in ln gamma with P1/sigma^2 = P2/sigma^2 =
/// gamma and T1 = T2 = r log2(1 + gamma) / 2 re-derived at each stencil
/// point. Both stencil points reuse the same draws; std_err is the
/// delta-method error of the paired difference. The power and noise
/// fields of `base` are overridden (sigma2 = 1, P = gamma). Throws
/// InsufficientSamplesError when fewer than 100 outage events are seen at
/// either stencil point.
DiversityEstimate estimate_diversity_fd(const model::SystemParams& base, double r,
                                        double gamma_db, double delta_db,
                                        const McOptions& options);

}  // namespace ehrelay::mc
