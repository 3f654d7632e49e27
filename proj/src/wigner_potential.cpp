#include "wignerlab/wigner_potential.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wignerlab/errors.hpp"

namespace wignerlab {

QuadratureSpec::QuadratureSpec(double cutoff, double step) : cutoff_(cutoff), step_(step), count_(0)
{
    if (!(cutoff > 0.0) || !std::isfinite(cutoff)) {
        throw ConfigError("quadrature cutoff Ly must be positive");
    }
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw ConfigError("quadrature step dy must be positive");
    }
    const double ratio = cutoff / step;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
        std::ostringstream os;
        os << "Ly / dy = " << cutoff << " / " << step << " is not a positive integer";
        throw ConfigError(os.str());
    }
    count_ = static_cast<int>(rounded);
}

namespace {

std::vector<double> difference_column(const PotentialProfile& profile, double x,
                                      const QuadratureSpec& quad)
{
    std::vector<double> d(static_cast<std::size_t>(quad.count()) + 1, 0.0);
    for (int j = 1; j <= quad.count(); ++j) {
        d[j] = potential_difference(profile, x, j * quad.step());
    }
    return d;
}

double sum_column(const std::vector<double>& d, double step, double v)
{
    double acc = 0.0;
    for (std::size_t j = 1; j < d.size(); ++j) {
        const double y = static_cast<double>(j) * step;
        acc += d[j] * std::sin(y * v) * step;
    }
    return -acc / std::numbers::pi;
}

}  // namespace

double wigner_potential(const PotentialProfile& profile, double x, double v,
                        const QuadratureSpec& quad)
{
    return sum_column(difference_column(profile, x, quad), quad.step(), v);
}

WignerPotentialCache::WignerPotentialCache(PotentialProfile profile) : profile_(std::move(profile)) {}

std::shared_ptr<const std::vector<double>> WignerPotentialCache::samples(double x,
                                                                         const QuadratureSpec& quad,
                                                                         double step, int count)
{
    const Key key{x, quad.cutoff(), quad.step()};
    {
        std::lock_guard lock(mutex_);
        auto it = columns_.find(key);
        if (it != columns_.end()) {
            for (const auto& col : it->second) {
                if (col.step == step && static_cast<int>(col.values->size()) > count) {
                    ++hits_;
                    return col.values;
                }
                const double ratio = step / col.step;
                const double r = std::round(ratio);
                if (r >= 2.0 && ratio == r &&
                    static_cast<double>(count) * r < static_cast<double>(col.values->size())) {
                    // k * step == (k * r) * col.step only holds bitwise when r is a power of two.
                    if (std::exp2(std::round(std::log2(r))) != r) continue;
                    const auto stride = static_cast<std::size_t>(r);
                    auto sub = std::make_shared<std::vector<double>>(static_cast<std::size_t>(count) + 1);
                    for (std::size_t k = 0; k < sub->size(); ++k) (*sub)[k] = (*col.values)[k * stride];
                    ++hits_;
                    return sub;
                }
            }
        }
    }

    const auto d = difference_column(profile_, x, quad);
    auto values = std::make_shared<std::vector<double>>(static_cast<std::size_t>(count) + 1);
    for (int k = 0; k <= count; ++k) {
        (*values)[k] = sum_column(d, quad.step(), static_cast<double>(k) * step);
    }

    std::lock_guard lock(mutex_);
    auto& list = columns_[key];
    for (const auto& col : list) {
        if (col.step == step && col.values->size() >= values->size()) return col.values;
    }
    list.push_back({step, values});
    return values;
}

std::size_t WignerPotentialCache::size() const
{
    std::lock_guard lock(mutex_);
    std::size_t n = 0;
    for (const auto& [key, list] : columns_) n += list.size();
    return n;
}

std::size_t WignerPotentialCache::hits() const
{
    std::lock_guard lock(mutex_);
    return hits_;
}

}  // namespace wignerlab
