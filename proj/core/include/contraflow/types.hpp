#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace contraflow {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Coordinate frame of a momentum-flow state. `original` is (position,
/// velocity); `barred` is (position, predicted position).
enum class Frame { original, barred };

[[nodiscard]] constexpr const char* to_string(Frame f) noexcept {
    return f == Frame::original ? "original" : "barred";
}

/// Stacked state (x1, x2) of a second-order optimization flow. Both blocks
/// have the same dimension n; the frame is fixed at construction.
struct FlowState {
    Vector x1;
    Vector x2;
    Frame frame = Frame::barred;

    FlowState() = default;
    FlowState(Vector a, Vector b, Frame fr) : x1(std::move(a)), x2(std::move(b)), frame(fr) {
        if (x1.size() != x2.size() || x1.size() < 1)
            throw std::invalid_argument("FlowState: x1 and x2 must have equal dimension >= 1");
    }

    [[nodiscard]] Index dim() const noexcept { return x1.size(); }

    [[nodiscard]] Vector stacked() const {
        Vector z(2 * x1.size());
        z << x1, x2;
        return z;
    }

    [[nodiscard]] static FlowState from_stacked(const Vector& z, Frame fr) {
        if (z.size() % 2 != 0 || z.size() < 2)
            throw std::invalid_argument("FlowState: stacked vector must have even dimension >= 2");
        const Index n = z.size() / 2;
        return FlowState(z.head(n), z.tail(n), fr);
    }
};

/// Thrown when construction preconditions are violated.
class ConstructionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an iterative solver fails to reach its tolerance.
class SolverError : public std::runtime_error {
  public:
    SolverError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual(residual), iterations(iterations) {}
    double residual;
    int iterations;
};

/// Thrown by integrate() when a step fails; carries the step index.
class IntegrationError : public std::runtime_error {
  public:
    IntegrationError(const std::string& what, int step)
        : std::runtime_error(what), step(step) {}
    int step;
};

/// Thrown when a sampler cannot produce usable pairs.
class SamplingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace contraflow
