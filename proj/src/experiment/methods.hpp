#pragma once

#include <optional>
#include <string>

#include "ehrelay/experiment.hpp"

namespace ehrelay::experiment::detail {

bool is_known_method(const std::string& method);

// Metric a method evaluates; empty for mc and non_coop, which follow the
// configured metric.
std::optional<Metric> method_metric(const std::string& method);

}  // namespace ehrelay::experiment::detail
