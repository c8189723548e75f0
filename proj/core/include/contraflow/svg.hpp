#pragma once

#include <span>
#include <string>

namespace contraflow {

/// Hand-emitted log-scale convergence plot: observed and bound series
/// against the step index, no plotting dependency, deterministic output.
[[nodiscard]] std::string convergence_svg(std::span<const double> xs,
                                          std::span<const double> observed,
                                          std::span<const double> bound,
                                          const std::string& title);

}  // namespace contraflow
