#include "wignerlab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wignerlab/errors.hpp"

namespace wignerlab {

PotentialProfile::PotentialProfile(std::vector<Segment> segments, double default_value,
                                   double device_length, EdgeRule edge_rule)
    : segments_(std::move(segments)),
      default_value_(default_value),
      device_length_(device_length),
      edge_rule_(edge_rule)
{
    if (!(device_length_ > 0.0) || !std::isfinite(device_length_)) {
        throw ConfigError("device_length must be positive and finite");
    }
    if (!std::isfinite(default_value_)) {
        throw ConfigError("potential default value must be finite");
    }
    for (const auto& s : segments_) {
        if (!std::isfinite(s.lo) || !std::isfinite(s.hi) || !std::isfinite(s.value) || s.lo > s.hi) {
            std::ostringstream os;
            os << "invalid potential segment [" << s.lo << ", " << s.hi << "] -> " << s.value;
            throw ConfigError(os.str());
        }
    }
    // Shared endpoints are allowed (earlier segment shadows), interior overlap is not.
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        for (std::size_t j = i + 1; j < segments_.size(); ++j) {
            const auto& a = segments_[i];
            const auto& b = segments_[j];
            if (std::min(a.hi, b.hi) > std::max(a.lo, b.lo)) {
                std::ostringstream os;
                os << "potential segments " << i << " and " << j << " overlap";
                throw ConfigError(os.str());
            }
        }
    }
    max_abs_ = std::abs(default_value_);
    for (const auto& s : segments_) max_abs_ = std::max(max_abs_, std::abs(s.value));
}

PotentialProfile PotentialProfile::barrier(double height, double half_width, double device_length)
{
    return PotentialProfile({{-half_width, half_width, height}}, 0.0, device_length);
}

PotentialProfile PotentialProfile::constant(double value, double device_length)
{
    return PotentialProfile({}, value, device_length);
}

double PotentialProfile::operator()(double x) const noexcept
{
    for (const auto& s : segments_) {
        if (x >= s.lo && x <= s.hi) return s.value;
    }
    return default_value_;
}

double PotentialProfile::left_limit(double x) const noexcept
{
    for (const auto& s : segments_) {
        if (x > s.lo && x <= s.hi) return s.value;
    }
    return default_value_;
}

double PotentialProfile::right_limit(double x) const noexcept
{
    for (const auto& s : segments_) {
        if (x >= s.lo && x < s.hi) return s.value;
    }
    return default_value_;
}

double PotentialProfile::sample(double x) const noexcept
{
    if (edge_rule_ == EdgeRule::closed) return (*this)(x);
    return 0.5 * (left_limit(x) + right_limit(x));
}

PotentialProfile PotentialProfile::with_edge_rule(EdgeRule rule) const
{
    PotentialProfile copy = *this;
    copy.edge_rule_ = rule;
    return copy;
}

PotentialProfile PotentialProfile::scaled(double factor) const
{
    auto segs = segments_;
    for (auto& s : segs) s.value *= factor;
    return PotentialProfile(std::move(segs), default_value_ * factor, device_length_, edge_rule_);
}

const char* to_string(EdgeRule rule) noexcept
{
    return rule == EdgeRule::mean ? "mean" : "closed";
}

double eval_potential(const PotentialProfile& profile, double x) noexcept { return profile(x); }

double potential_difference(const PotentialProfile& profile, double x, double y) noexcept
{
    const double half = 0.5 * y;
    return profile.sample(x + half) - profile.sample(x - half);
}

}  // namespace wignerlab
