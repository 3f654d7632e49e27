#pragma once

#include <vector>

namespace wignerlab {

/// Closed interval [lo, hi] carrying a constant potential energy.
struct Segment {
    double lo;
    double hi;
    double value;
};

/// How the samples feeding D_V treat a point sitting exactly on a jump of V.
///  closed: same as operator() (first closed segment containing the point).
///  mean:   average of the left and right limits.
enum class EdgeRule { closed, mean };

/// Piecewise-constant external potential V(x) on a device [-l/2, l/2].
///
/// Evaluation is total on the real line: points outside every segment take
/// `default_value`. Segments are closed intervals; if a point lies on the
/// shared endpoint of two segments the earlier one wins.
class PotentialProfile {
public:
    PotentialProfile() = default;

    /// Throws ConfigError if the segments overlap (beyond sharing an endpoint),
    /// have lo > hi, carry non-finite values, or if device_length <= 0.
    PotentialProfile(std::vector<Segment> segments, double default_value, double device_length,
                     EdgeRule edge_rule = EdgeRule::closed);

    /// The square barrier used throughout the experiments: height on [-half_width, half_width].
    static PotentialProfile barrier(double height, double half_width, double device_length);

    /// V identically equal to `value` on the whole line.
    static PotentialProfile constant(double value, double device_length);

    double operator()(double x) const noexcept;

    /// Limits from below and from above; equal to operator() away from segment endpoints.
    double left_limit(double x) const noexcept;
    double right_limit(double x) const noexcept;

    /// Value used by potential_difference, according to edge_rule().
    double sample(double x) const noexcept;

    EdgeRule edge_rule() const noexcept { return edge_rule_; }
    PotentialProfile with_edge_rule(EdgeRule rule) const;

    const std::vector<Segment>& segments() const noexcept { return segments_; }
    double default_value() const noexcept { return default_value_; }
    double device_length() const noexcept { return device_length_; }
    double max_abs() const noexcept { return max_abs_; }

    /// Copy with every segment value and the default multiplied by `factor`.
    PotentialProfile scaled(double factor) const;

private:
    std::vector<Segment> segments_;
    double default_value_ = 0.0;
    double device_length_ = 1.0;
    double max_abs_ = 0.0;
    EdgeRule edge_rule_ = EdgeRule::closed;
};

const char* to_string(EdgeRule rule) noexcept;

double eval_potential(const PotentialProfile& profile, double x) noexcept;

/// D_V(x, y) = V(x + y/2) - V(x - y/2), with V sampled by profile.sample().
double potential_difference(const PotentialProfile& profile, double x, double y) noexcept;

}  // namespace wignerlab
