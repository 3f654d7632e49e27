#pragma once

#include <complex>
#include <span>
#include <vector>

namespace wignerlab {

/// Fast product with an n x n Toeplitz matrix T_{ij} = symbol[(i - j) + n - 1]
/// through a circulant embedding of size 2n and real FFTs.
class ToeplitzMatvec {
public:
    ToeplitzMatvec() = default;

    /// `symbol` holds the 2n - 1 diagonals, index 0 is offset -(n-1).
    explicit ToeplitzMatvec(std::span<const double> symbol);

    std::size_t size() const noexcept { return n_; }

    /// y = T x. Reentrant; x and y must both have size().
    void apply(std::span<const double> x, std::span<double> y) const;

private:
    std::size_t n_ = 0;
    std::size_t padded_ = 0;
    std::vector<std::complex<double>> spectrum_;
};

}  // namespace wignerlab
