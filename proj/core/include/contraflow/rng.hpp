#pragma once

#include "contraflow/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace contraflow {

/// Deterministic random vectors. Distribution mapping is hand-rolled so
/// identical seeds give identical samples on every standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        do { u = uniform(); } while (u <= 0.0);
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 2.0 * M_PI * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Vector normal_vector(Index n) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) v[i] = normal();
        return v;
    }

    /// Uniform in the ball of given radius around the center.
    Vector in_ball(const Vector& center, double radius) {
        Vector dir = normal_vector(center.size());
        const double nrm = dir.norm();
        if (nrm == 0.0) return center;
        const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(center.size()));
        return center + (r / nrm) * dir;
    }

    Vector on_sphere(Index n) {
        Vector dir = normal_vector(n);
        const double nrm = dir.norm();
        return nrm == 0.0 ? Vector::Unit(n, 0) : Vector((1.0 / nrm) * dir);
    }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace contraflow
