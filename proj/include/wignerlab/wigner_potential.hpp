#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "wignerlab/potential.hpp"

namespace wignerlab {

/// Truncation and step of the correlation-length quadrature.
class QuadratureSpec {
public:
    /// Throws ConfigError unless cutoff > 0, step > 0 and cutoff/step is a positive integer.
    QuadratureSpec(double cutoff, double step);

    double cutoff() const noexcept { return cutoff_; }
    double step() const noexcept { return step_; }
    int count() const noexcept { return count_; }

    friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;

private:
    double cutoff_;
    double step_;
    int count_;
};

/// Truncated Wigner potential
///   V_w(x, v) = -(1/pi) * sum_{j=1}^{N_y} D_V(x, j dy) sin(j dy v) dy
/// summed in ascending j with uniform weights.
double wigner_potential(const PotentialProfile& profile, double x, double v,
                        const QuadratureSpec& quad);

/// Samples V_w(x, k * step) for k = 0..count, reusing previously computed columns.
///
/// Entries are keyed on (x, quadrature, step). A request whose step is an integer
/// multiple of a cached step is served by subsampling that column, so a sweep that
/// builds the finest velocity lattice first pays for the quadrature only once per x.
/// Thread-safe; concurrent inserts of the same key are idempotent.
class WignerPotentialCache {
public:
    explicit WignerPotentialCache(PotentialProfile profile);

    const PotentialProfile& profile() const noexcept { return profile_; }

    std::shared_ptr<const std::vector<double>> samples(double x, const QuadratureSpec& quad,
                                                       double step, int count);

    std::size_t size() const;
    std::size_t hits() const;

private:
    using Key = std::tuple<double, double, double>;  // x, cutoff, quadrature step

    struct Column {
        double step;
        std::shared_ptr<const std::vector<double>> values;
    };

    PotentialProfile profile_;
    mutable std::mutex mutex_;
    std::map<Key, std::vector<Column>> columns_;
    std::size_t hits_ = 0;
};

}  // namespace wignerlab
