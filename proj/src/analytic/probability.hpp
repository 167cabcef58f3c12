#pragma once

#include <string_view>

namespace ehrelay::analytic::detail {

// Closed-form probabilities may leave [0, 1] through rounding. Excursions up
// to this size are clamped (debug-logged); larger ones are formula misuse.
inline constexpr double kClampSlack = 1e-6;

enum class OnExcursion { raise, warn };

double clamp_probability(double value, std::string_view what,
                         OnExcursion policy = OnExcursion::raise);

}  // namespace ehrelay::analytic::detail
