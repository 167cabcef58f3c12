#include "ehrelay/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ehrelay/errors.hpp"
#include "ehrelay/specfun.hpp"

namespace ehrelay::model {

namespace {

void require(bool ok, const char* what, double value) {
  if (ok) return;
  std::ostringstream msg;
  msg << "invalid system parameters: " << what << " (got " << value << ")";
  throw ValidationError(msg.str());
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed ^ ((index + 1) * 0x9E3779B97F4A7C15ULL);
  splitmix64(state);
  return splitmix64(state);
}

}  // namespace

SystemParams build_params(double p1, double p2, double sigma2, double eta, double lambda,
                          double epsilon, double d1, double path_loss_exp) {
  SystemParams params;
  params.p1 = p1;
  params.p2 = p2;
  params.sigma2 = sigma2;
  params.eta = eta;
  params.lambda = lambda;
  params.epsilon = epsilon;
  params.d1 = d1;
  params.path_loss_exp = path_loss_exp;
  require(std::isfinite(d1) && d1 > 0.0 && d1 < 1.0, "d1 must lie in (0, 1)", d1);
  require(std::isfinite(path_loss_exp) && path_loss_exp >= 0.0,
          "path_loss_exp must be finite and >= 0", path_loss_exp);
  params.omega1 = std::pow(d1, -path_loss_exp);
  params.omega2 = std::pow(1.0 - d1, -path_loss_exp);
  validate(params);
  return params;
}

void validate(const SystemParams& p) {
  require(std::isfinite(p.p1) && p.p1 > 0.0, "p1 must be positive", p.p1);
  require(std::isfinite(p.p2) && p.p2 > 0.0, "p2 must be positive", p.p2);
  require(std::isfinite(p.sigma2) && p.sigma2 > 0.0, "sigma2 must be positive", p.sigma2);
  require(p.eta > 0.0 && p.eta <= 1.0, "eta must lie in (0, 1]", p.eta);
  require(p.lambda > 0.0 && p.lambda < 1.0, "lambda must lie in (0, 1)", p.lambda);
  require(p.epsilon >= 0.0 && p.epsilon <= 1.0, "epsilon must lie in [0, 1]", p.epsilon);
  require(p.d1 > 0.0 && p.d1 < 1.0, "d1 must lie in (0, 1)", p.d1);
  require(std::isfinite(p.omega1) && p.omega1 > 0.0, "omega1 must be positive", p.omega1);
  require(std::isfinite(p.omega2) && p.omega2 > 0.0, "omega2 must be positive", p.omega2);
}

DerivedCoeffs derived_coeffs(const SystemParams& params) {
  return {1.0 + params.epsilon * params.lambda / (1.0 - params.lambda),
          1.0 / (params.eta * params.lambda)};
}

TargetRates TargetRates::from_rates(double t1, double t2) {
  if (!(t1 >= 0.0) || !(t2 >= 0.0)) throw ValidationError("target rates must be >= 0");
  return {t1, t2, std::exp2(2.0 * t1) - 1.0, std::exp2(2.0 * t2) - 1.0};
}

TargetRates TargetRates::from_multiplexing_gain(double r, double gamma) {
  if (!(r >= 0.0)) throw ValidationError("multiplexing gain must be >= 0");
  if (!(gamma > 0.0)) throw ValidationError("SNR must be positive");
  const double rate = 0.5 * r * std::log2(1.0 + gamma);
  const double tau = std::expm1(r * std::log1p(gamma));
  return {rate, rate, tau, tau};
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t index)
    : engine_(substream_seed(seed, index)) {}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::exponential(double mean) {
  return -mean * std::log1p(-uniform());
}

ChannelDraw sample_channel(const SystemParams& params, RandomStream& stream) {
  const double g1 = stream.exponential(params.omega1);
  const double g2 = stream.exponential(params.omega2);
  return {g1, g2};
}

double relay_power(const SystemParams& params, const ChannelDraw& draw) {
  return params.eta * params.lambda * (params.p1 * draw.g1 + params.p2 * draw.g2);
}

SnrPair end_to_end_snrs(const SystemParams& params, const DerivedCoeffs& coeffs,
                        const ChannelDraw& draw) {
  if (draw.g1 <= 0.0 || draw.g2 <= 0.0) return {};
  const double product = draw.g1 * draw.g2;
  return {params.p2 / params.sigma2 * product / (coeffs.b * draw.g1 + coeffs.c),
          params.p1 / params.sigma2 * product / (coeffs.b * draw.g2 + coeffs.c)};
}

SnrPair end_to_end_snrs(const SystemParams& params, const ChannelDraw& draw) {
  return end_to_end_snrs(params, derived_coeffs(params), draw);
}

SnrPair end_to_end_snrs_harvest_form(const SystemParams& params, const ChannelDraw& draw) {
  if (draw.g1 <= 0.0 || draw.g2 <= 0.0) return {};
  const double split = 1.0 + params.epsilon * params.lambda / (1.0 - params.lambda);
  const double harvest = params.eta * params.lambda;
  return {params.p2 * draw.g2 / params.sigma2 / (split + 1.0 / (harvest * draw.g1)),
          params.p1 * draw.g1 / params.sigma2 / (split + 1.0 / (harvest * draw.g2))};
}

SnrPair end_to_end_snrs_exact_beta(const SystemParams& params, const ChannelDraw& draw) {
  if (draw.g1 <= 0.0 || draw.g2 <= 0.0) return {};
  const double keep = 1.0 - params.lambda;
  const double sigma_a2 = (1.0 - params.epsilon) * params.sigma2;
  const double sigma_b2 = params.epsilon * params.sigma2;
  const double received = params.p1 * draw.g1 + params.p2 * draw.g2;
  // beta^2 * P_r
  const double gain = params.eta * params.lambda * received /
                      (keep * received + keep * sigma_a2 + sigma_b2);
  const double relay_noise = gain * (keep * sigma_a2 + sigma_b2);
  const double product = draw.g1 * draw.g2;
  return {gain * keep * params.p2 * product / (draw.g1 * relay_noise + params.sigma2),
          gain * keep * params.p1 * product / (draw.g2 * relay_noise + params.sigma2)};
}

RatePair achievable_rates(const SnrPair& snrs) {
  return {0.5 * std::log2(1.0 + snrs.gamma1), 0.5 * std::log2(1.0 + snrs.gamma2)};
}

double NonCoopBaseline::outage(const TargetRates& targets) const {
  const double g_needed =
      std::max(targets.tau1 / snr_mean1, targets.tau2 / snr_mean2);
  return -std::expm1(-g_needed);
}

double NonCoopBaseline::capacity() const {
  double total = 0.0;
  for (double snr : {snr_mean1, snr_mean2}) {
    total += specfun::scaled_exp_integral_e1(1.0 / snr);
  }
  return total / (2.0 * std::numbers::ln2);
}

double NonCoopBaseline::diversity(double r, double gamma) {
  if (!(r > 0.0) || !(gamma > 0.0)) {
    throw DomainError("NonCoopBaseline::diversity: need r > 0 and gamma > 0");
  }
  const double growth = std::pow(1.0 + gamma, r);
  const double w = (growth - 1.0) / gamma;
  const double dw = (r * gamma * growth / (1.0 + gamma) - growth + 1.0) / (gamma * gamma);
  const double p_out = -std::expm1(-w);
  return -gamma * std::exp(-w) * dw / p_out;
}

NonCoopBaseline non_coop_baseline(const SystemParams& params) {
  validate(params);
  NonCoopBaseline baseline;
  baseline.omega_direct = std::pow(1.0, -params.path_loss_exp);
  baseline.snr_mean1 = params.p2 * baseline.omega_direct / params.sigma2;
  baseline.snr_mean2 = params.p1 * baseline.omega_direct / params.sigma2;
  return baseline;
}

}  // namespace ehrelay::model
