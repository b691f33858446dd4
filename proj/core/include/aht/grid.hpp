#pragma once

#include <cstddef>
#include <vector>

namespace aht {

/// Uniform periodic lattice on [0,2pi)^2 with n points per axis, n a power of
/// two, spacing h = 2pi/n.  Wavenumbers follow DFT storage order: index i on
/// an axis carries the integer frequency i for i <= n/2 and i - n above, so
/// each axis holds {-n/2+1, ..., n/2}.  The Nyquist frequency n/2 is kept in
/// the table; differentiation zeroes it (see ops.cpp).
class Grid {
public:
    static constexpr int dim = 2;

    Grid() = default;

    int n() const { return n_; }
    double h() const { return h_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }

    /// Integer frequency carried by DFT index i on either axis.
    int wavenumber(int i) const { return wavenumbers_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& wavenumbers() const { return wavenumbers_; }

    /// Lattice coordinate of index i: x = i * h.
    double coord(int i) const { return h_ * i; }

    std::size_t index(int i1, int i2) const {
        return static_cast<std::size_t>(i2) * n_ + i1;  // x1 fastest
    }

    friend bool operator==(const Grid& a, const Grid& b) { return a.n_ == b.n_; }
    friend bool operator!=(const Grid& a, const Grid& b) { return a.n_ != b.n_; }

private:
    friend Grid make_grid(int n);
    int n_ = 0;
    double h_ = 0.0;
    std::vector<int> wavenumbers_;
};

/// Builds a grid; rejects n < 8 or non-power-of-two n with SizingError.
Grid make_grid(int n);

}  // namespace aht
