#include "wignerlab/toeplitz.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "wignerlab/errors.hpp"

namespace wignerlab {

namespace {

// FFTW planning is not thread-safe; execution through the new-array interface is.
struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

std::mutex& plan_mutex()
{
    static std::mutex m;
    return m;
}

PlanPair plans_for(std::size_t padded)
{
    std::lock_guard lock(plan_mutex());
    static std::map<std::size_t, PlanPair> registry;
    auto it = registry.find(padded);
    if (it != registry.end()) return it->second;

    const int n = static_cast<int>(padded);
    std::vector<double> real(padded);
    std::vector<std::complex<double>> spec(padded / 2 + 1);
    auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_1d(n, real.data(), cplx, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.backward = fftw_plan_dft_c2r_1d(n, cplx, real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    registry.emplace(padded, p);
    return p;
}

}  // namespace

ToeplitzMatvec::ToeplitzMatvec(std::span<const double> symbol)
{
    if (symbol.size() % 2 == 0) {
        throw ContractError("Toeplitz symbol must have odd length 2n - 1");
    }
    n_ = (symbol.size() + 1) / 2;
    padded_ = 2 * n_;

    // First column of the circulant: offsets 0..n-1, a zero, then offsets -(n-1)..-1.
    std::vector<double> column(padded_, 0.0);
    for (std::size_t k = 0; k < n_; ++k) column[k] = symbol[n_ - 1 + k];
    for (std::size_t k = 1; k < n_; ++k) column[padded_ - k] = symbol[n_ - 1 - k];

    spectrum_.resize(padded_ / 2 + 1);
    const auto plans = plans_for(padded_);
    fftw_execute_dft_r2c(plans.forward, column.data(),
                         reinterpret_cast<fftw_complex*>(spectrum_.data()));
}

void ToeplitzMatvec::apply(std::span<const double> x, std::span<double> y) const
{
    if (x.size() != n_ || y.size() != n_) {
        throw ContractError("Toeplitz matvec: vector length does not match operator size");
    }
    const auto plans = plans_for(padded_);
    std::vector<double> buf(padded_, 0.0);
    std::copy(x.begin(), x.end(), buf.begin());
    std::vector<std::complex<double>> spec(padded_ / 2 + 1);
    fftw_execute_dft_r2c(plans.forward, buf.data(), reinterpret_cast<fftw_complex*>(spec.data()));
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= spectrum_[k];
    fftw_execute_dft_c2r(plans.backward, reinterpret_cast<fftw_complex*>(spec.data()), buf.data());
    const double scale = 1.0 / static_cast<double>(padded_);
    for (std::size_t i = 0; i < n_; ++i) y[i] = buf[i] * scale;
}

}  // namespace wignerlab
