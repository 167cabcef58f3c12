#include "ehrelay/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "ehrelay/errors.hpp"

namespace ehrelay::mc {

namespace {

using model::ChannelDraw;
using model::RandomStream;
using model::SnrPair;
using model::SystemParams;

// Count/mean/M2 triple merged with Chan's pairwise update.
struct Moments {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double total = static_cast<double>(count + other.count);
    const double delta = other.mean - mean;
    mean += delta * static_cast<double>(other.count) / total;
    m2 += other.m2 + delta * delta * static_cast<double>(count) *
                         static_cast<double>(other.count) / total;
    count += other.count;
  }

  static Moments from_count(std::int64_t hits, std::int64_t trials) {
    Moments m;
    m.count = trials;
    if (trials == 0) return m;
    const double k = static_cast<double>(hits);
    m.mean = k / static_cast<double>(trials);
    m.m2 = k - k * k / static_cast<double>(trials);
    return m;
  }

  Estimate to_estimate(std::uint64_t seed) const {
    Estimate e;
    e.mean = mean;
    e.n = count;
    e.seed = seed;
    e.std_err = count > 1 ? std::sqrt(std::max(m2, 0.0) / static_cast<double>(count - 1) /
                                      static_cast<double>(count))
                          : 0.0;
    return e;
  }
};

void require_samples(std::int64_t n) {
  if (n < 1) throw ValidationError("Monte Carlo sample count must be >= 1");
}

unsigned resolve_workers(unsigned requested, std::int64_t chunks) {
  unsigned w = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::int64_t>(w, std::max<std::int64_t>(chunks, 1)));
}

// Runs fn(stream, draws_in_chunk) for every chunk and returns the per-chunk
// results in chunk order.
template <class Result, class ChunkFn>
std::vector<Result> run_chunks(const McOptions& options, ChunkFn fn) {
  require_samples(options.n);
  const std::int64_t chunks = (options.n + kChunkSize - 1) / kChunkSize;
  std::vector<Result> results(static_cast<std::size_t>(chunks));
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    try {
      for (std::int64_t k = next++; k < chunks; k = next++) {
        const std::int64_t begin = k * kChunkSize;
        const std::int64_t count = std::min(kChunkSize, options.n - begin);
        RandomStream stream(options.seed, static_cast<std::uint64_t>(k));
        results[static_cast<std::size_t>(k)] = fn(stream, count);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  const unsigned workers = resolve_workers(options.workers, chunks);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

SnrPair snrs_for(const SystemParams& params, const model::DerivedCoeffs& coeffs,
                 const ChannelDraw& draw, BetaModel beta) {
  return beta == BetaModel::exact ? model::end_to_end_snrs_exact_beta(params, draw)
                                  : model::end_to_end_snrs(params, coeffs, draw);
}

struct EventCounts {
  std::int64_t trials = 0;
  std::int64_t system = 0;
  std::int64_t first = 0;
  std::int64_t second = 0;
  std::int64_t joint = 0;
};

}  // namespace

OutageEstimates estimate_outage_events(const SystemParams& params,
                                       const model::TargetRates& targets,
                                       const McOptions& options) {
  model::validate(params);
  const auto coeffs = model::derived_coeffs(params);
  auto chunk_results = run_chunks<EventCounts>(options, [&](RandomStream& stream,
                                                            std::int64_t count) {
    EventCounts c;
    c.trials = count;
    for (std::int64_t i = 0; i < count; ++i) {
      const ChannelDraw draw = model::sample_channel(params, stream);
      const SnrPair snr = snrs_for(params, coeffs, draw, options.beta);
      const bool out1 = snr.gamma1 < targets.tau1;
      const bool out2 = snr.gamma2 < targets.tau2;
      c.first += out1;
      c.second += out2;
      c.joint += out1 && out2;
      c.system += out1 || out2;
    }
    return c;
  });

  EventCounts total;
  for (const auto& c : chunk_results) {
    total.trials += c.trials;
    total.system += c.system;
    total.first += c.first;
    total.second += c.second;
    total.joint += c.joint;
  }
  OutageEstimates out;
  out.system = Moments::from_count(total.system, total.trials).to_estimate(options.seed);
  out.first = Moments::from_count(total.first, total.trials).to_estimate(options.seed);
  out.second = Moments::from_count(total.second, total.trials).to_estimate(options.seed);
  out.joint = Moments::from_count(total.joint, total.trials).to_estimate(options.seed);
  return out;
}

Estimate estimate_outage(const SystemParams& params, const model::TargetRates& targets,
                         const McOptions& options) {
  return estimate_outage_events(params, targets, options).system;
}

CapacityEstimates estimate_capacity_terms(const SystemParams& params,
                                          const McOptions& options) {
  model::validate(params);
  const auto coeffs = model::derived_coeffs(params);
  struct Triple {
    Moments sum, first, second;
  };
  auto chunk_results = run_chunks<Triple>(options, [&](RandomStream& stream,
                                                       std::int64_t count) {
    Triple t;
    for (std::int64_t i = 0; i < count; ++i) {
      const ChannelDraw draw = model::sample_channel(params, stream);
      const auto rates = model::achievable_rates(snrs_for(params, coeffs, draw, options.beta));
      t.first.add(rates.r1);
      t.second.add(rates.r2);
      t.sum.add(rates.r1 + rates.r2);
    }
    return t;
  });

  Triple total;
  for (const auto& t : chunk_results) {
    total.sum.merge(t.sum);
    total.first.merge(t.first);
    total.second.merge(t.second);
  }
  return {total.sum.to_estimate(options.seed), total.first.to_estimate(options.seed),
          total.second.to_estimate(options.seed)};
}

Estimate estimate_capacity(const SystemParams& params, const McOptions& options) {
  return estimate_capacity_terms(params, options).sum;
}

std::vector<double> sample_z(double a, double b, double c, double omega1, double omega2,
                             const McOptions& options) {
  if (!(a >= 0.0 && b >= 0.0 && c >= 0.0)) {
    throw DomainError("sample_z: a, b, c must be >= 0");
  }
  if (!(omega1 > 0.0 && omega2 > 0.0)) throw DomainError("sample_z: omega must be positive");
  auto chunk_results = run_chunks<std::vector<double>>(options, [&](RandomStream& stream,
                                                                    std::int64_t count) {
    std::vector<double> z(static_cast<std::size_t>(count));
    for (auto& v : z) {
      const double x = stream.exponential(omega1);
      const double y = stream.exponential(omega2);
      const double den = b * x + c;
      v = den > 0.0 ? a * x * y / den : 0.0;
    }
    return z;
  });
  std::vector<double> all;
  all.reserve(static_cast<std::size_t>(options.n));
  for (const auto& part : chunk_results) all.insert(all.end(), part.begin(), part.end());
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<CdfPoint> empirical_cdf_z(double a, double b, double c, double omega1,
                                      double omega2, const std::vector<double>& z_grid,
                                      const McOptions& options) {
  if (!std::is_sorted(z_grid.begin(), z_grid.end())) {
    throw ValidationError("empirical_cdf_z: grid must be sorted ascending");
  }
  const auto sample = sample_z(a, b, c, omega1, omega2, options);
  std::vector<CdfPoint> out;
  out.reserve(z_grid.size());
  const double n = static_cast<double>(sample.size());
  for (double z : z_grid) {
    // Z is continuous with Z > 0 a.s.; count strictly smaller values.
    const auto below = std::lower_bound(sample.begin(), sample.end(), z) - sample.begin();
    out.push_back({z, static_cast<double>(below) / n});
  }
  return out;
}

double ks_distance(const std::vector<double>& sorted_sample,
                   const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(sorted_sample.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
    const double f = cdf(sorted_sample[i]);
    worst = std::max({worst, f - static_cast<double>(i) / n,
                      static_cast<double>(i + 1) / n - f});
  }
  return worst;
}

DiversityEstimate estimate_diversity_fd(const SystemParams& base, double r, double gamma_db,
                                        double delta_db, const McOptions& options) {
  if (!(r > 0.0)) {
    throw DomainError("estimate_diversity_fd: r must be positive (r = 0 gives P_out = 0)");
  }
  if (!(delta_db > 0.0)) throw DomainError("estimate_diversity_fd: delta_db must be positive");
  const double gamma = std::pow(10.0, gamma_db / 10.0);
  const double log_step = delta_db * std::log(10.0) / 10.0;

  auto at = [&](double g) {
    SystemParams p = base;
    p.sigma2 = 1.0;
    p.p1 = g;
    p.p2 = g;
    model::validate(p);
    return std::pair{p, model::TargetRates::from_multiplexing_gain(r, g)};
  };
  const auto [p_lo, t_lo] = at(gamma * std::exp(-log_step));
  const auto [p_hi, t_hi] = at(gamma * std::exp(log_step));
  const auto c_lo = model::derived_coeffs(p_lo);
  const auto c_hi = model::derived_coeffs(p_hi);

  struct Paired {
    std::int64_t trials = 0, lo = 0, hi = 0, both = 0;
  };
  auto chunk_results = run_chunks<Paired>(options, [&](RandomStream& stream,
                                                       std::int64_t count) {
    Paired c;
    c.trials = count;
    for (std::int64_t i = 0; i < count; ++i) {
      const ChannelDraw draw = model::sample_channel(p_lo, stream);
      const SnrPair s_lo = snrs_for(p_lo, c_lo, draw, options.beta);
      const SnrPair s_hi = snrs_for(p_hi, c_hi, draw, options.beta);
      const bool out_lo = s_lo.gamma1 < t_lo.tau1 || s_lo.gamma2 < t_lo.tau2;
      const bool out_hi = s_hi.gamma1 < t_hi.tau1 || s_hi.gamma2 < t_hi.tau2;
      c.lo += out_lo;
      c.hi += out_hi;
      c.both += out_lo && out_hi;
    }
    return c;
  });
  Paired total;
  for (const auto& c : chunk_results) {
    total.trials += c.trials;
    total.lo += c.lo;
    total.hi += c.hi;
    total.both += c.both;
  }

  if (total.lo < 100 || total.hi < 100) {
    std::ostringstream msg;
    msg << "estimate_diversity_fd: only " << std::min(total.lo, total.hi)
        << " outage events at a stencil point (need >= 100) for r = " << r
        << ", gamma = " << gamma_db << " dB, n = " << total.trials;
    throw InsufficientSamplesError(msg.str());
  }

  const double n = static_cast<double>(total.trials);
  const double q_lo = static_cast<double>(total.lo) / n;
  const double q_hi = static_cast<double>(total.hi) / n;
  const double q_both = static_cast<double>(total.both) / n;
  // Var(X_hi/q_hi - X_lo/q_lo) for the paired Bernoulli indicators.
  const double var = q_hi * (1.0 - q_hi) / (q_hi * q_hi) +
                     q_lo * (1.0 - q_lo) / (q_lo * q_lo) -
                     2.0 * (q_both - q_lo * q_hi) / (q_lo * q_hi);

  DiversityEstimate out;
  out.value = -(std::log(q_hi) - std::log(q_lo)) / (2.0 * log_step);
  out.std_err = std::sqrt(std::max(var, 0.0) / n) / (2.0 * log_step);
  out.outage_low = q_lo;
  out.outage_high = q_hi;
  out.n = total.trials;
  out.seed = options.seed;
  return out;
}

}  // namespace ehrelay::mc
