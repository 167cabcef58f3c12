#pragma once

#include <cstdint>
#include <random>

namespace ehrelay::model {

// Protocol parameterization. Powers and noise are linear and normalized;
// the fading means follow the path-loss geometry with the S1-S2 distance
// normalized to one. Construct through build_params().
struct SystemParams {
  double p1 = 1.0;
  double p2 = 1.0;
  double sigma2 = 1.0;       // total noise sigma_a^2 + sigma_b^2
  double eta = 1.0;          // energy conversion efficiency, (0, 1]
  double lambda = 0.75;      // power splitting ratio, (0, 1)
  double epsilon = 0.5;      // baseband share of the noise, [0, 1]
  double d1 = 0.5;           // S1-relay distance, (0, 1)
  double path_loss_exp = 3.0;
  double omega1 = 8.0;       // E|h1|^2
  double omega2 = 8.0;       // E|h2|^2
};

/// Validates every range and derives omega_i from the geometry. Throws
/// ValidationError naming the first violated constraint.
SystemParams build_params(double p1, double p2, double sigma2, double eta, double lambda,
                          double epsilon, double d1, double path_loss_exp);

/// Re-checks an existing parameter set (e.g. after a sweep edited a field).
void validate(const SystemParams& params);

// Amplification-noise coefficient b >= 1 and harvest-inverse coefficient c.
struct DerivedCoeffs {
  double b = 1.0;
  double c = 1.0;
};

DerivedCoeffs derived_coeffs(const SystemParams& params);

struct ChannelDraw {
  double g1 = 0.0;  // |h1|^2
  double g2 = 0.0;  // |h2|^2
};

struct TargetRates {
  double t1 = 0.0;  // bits/s/Hz
  double t2 = 0.0;
  double tau1 = 0.0;  // 2^(2 t1) - 1
  double tau2 = 0.0;

  static TargetRates from_rates(double t1, double t2);
  // Symmetric thresholds from a multiplexing gain r at per-source SNR gamma:
  // R = r * log2(1 + gamma) / 2, hence tau = (1 + gamma)^r - 1.
  static TargetRates from_multiplexing_gain(double r, double gamma);
};

/// Deterministic uniform/exponential source. A stream is identified by
/// (seed, index); the engine state is mt19937_64 seeded with two rounds of
/// splitmix64 over seed ^ (index + 1) * 0x9E3779B97F4A7C15, so substreams
/// for different indices are decorrelated and reproducible across
/// platforms.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t index);

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double exponential(double mean);

 private:
  std::mt19937_64 engine_;
};

ChannelDraw sample_channel(const SystemParams& params, RandomStream& stream);

/// Relay transmit power eta * lambda * (P1 g1 + P2 g2).
double relay_power(const SystemParams& params, const ChannelDraw& draw);

struct SnrPair {
  double gamma1 = 0.0;  // at S1 (carries S2's message)
  double gamma2 = 0.0;
};

/// End-to-end SNRs in the product form
///   gamma1 = (P2/sigma^2) g1 g2 / (b g1 + c),
///   gamma2 = (P1/sigma^2) g1 g2 / (b g2 + c).
/// Zero gains give zero SNR.
SnrPair end_to_end_snrs(const SystemParams& params, const DerivedCoeffs& coeffs,
                        const ChannelDraw& draw);
SnrPair end_to_end_snrs(const SystemParams& params, const ChannelDraw& draw);

/// Same SNRs written with the harvested power in the denominator,
///   gamma1 = (P2 g2 / sigma^2) / (1 + eps lambda/(1-lambda) + 1/(eta lambda g1)).
/// Algebraically identical to end_to_end_snrs; kept as an independent path.
SnrPair end_to_end_snrs_harvest_form(const SystemParams& params, const ChannelDraw& draw);

/// SNRs without dropping the receiver noise from the relay's normalization
/// factor (sigma_a^2 = (1 - eps) sigma^2, sigma_b^2 = eps sigma^2). Only
/// used to measure the effect of that approximation.
SnrPair end_to_end_snrs_exact_beta(const SystemParams& params, const ChannelDraw& draw);

struct RatePair {
  double r1 = 0.0;
  double r2 = 0.0;
};

/// R_i = log2(1 + gamma_i) / 2 (two half-duration slots per exchange).
RatePair achievable_rates(const SnrPair& snrs);

/// Direct S1 <-> S2 exchange without the relay: unit distance, so the link
/// is Rayleigh with mean gain 1, reciprocal, and each direction owns one
/// of two equal half-duplex slots (rate factor 1/2).
struct NonCoopBaseline {
  double omega_direct = 1.0;
  double snr_mean1 = 0.0;  // mean SNR at S1: P2 * omega / sigma^2
  double snr_mean2 = 0.0;  // mean SNR at S2: P1 * omega / sigma^2

  // Pr(R1 < T1 or R2 < T2) with a single shared gain g ~ Exp(omega).
  double outage(const TargetRates& targets) const;
  // Sum over both directions of E[log2(1 + snr g) / 2].
  double capacity() const;
  // -d ln P_out / d ln gamma for the symmetric threshold tau = (1+gamma)^r - 1.
  static double diversity(double r, double gamma);
};

NonCoopBaseline non_coop_baseline(const SystemParams& params);

}  // namespace ehrelay::model
