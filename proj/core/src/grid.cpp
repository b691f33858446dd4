#include "aht/grid.hpp"

#include <numbers>
#include <string>

#include "aht/errors.hpp"

namespace aht {

Grid make_grid(int n) {
    if (n < 8)
        throw SizingError("grid: n = " + std::to_string(n) +
                          " too small (need n >= 8; dealiasing is meaningless below)");
    if ((n & (n - 1)) != 0)
        throw SizingError("grid: n = " + std::to_string(n) + " is not a power of two");
    Grid g;
    g.n_ = n;
    g.h_ = 2.0 * std::numbers::pi / n;
    g.wavenumbers_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g.wavenumbers_[static_cast<std::size_t>(i)] = (i <= n / 2) ? i : i - n;
    return g;
}

}  // namespace aht
