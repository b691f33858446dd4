#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "aht/grid.hpp"

namespace aht {

/// Real scalar lattice data in physical space, x1-fastest layout.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid_(g), v_(g.size(), 0.0) {}
    ScalarField(const Grid& g, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return v_.size(); }

    double operator[](std::size_t i) const { return v_[i]; }
    double& operator[](std::size_t i) { return v_[i]; }
    double at(int i1, int i2) const { return v_[grid_.index(i1, i2)]; }
    double& at(int i1, int i2) { return v_[grid_.index(i1, i2)]; }

    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    bool finite() const;

private:
    Grid grid_;
    std::vector<double> v_;
};

/// d = 2 vector field; both components share one grid.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const Grid& g) : c_{ScalarField(g), ScalarField(g)} {}
    VectorField(ScalarField c1, ScalarField c2);

    const Grid& grid() const { return c_[0].grid(); }
    const ScalarField& comp(int j) const { return c_[j]; }
    ScalarField& comp(int j) { return c_[j]; }

    bool finite() const { return c_[0].finite() && c_[1].finite(); }

private:
    std::array<ScalarField, 2> c_;
};

/// Symmetric 2x2 tensor field; xy stored once.
struct SymTensorField {
    ScalarField xx, xy, yy;
    const Grid& grid() const { return xx.grid(); }
};

/// Samples f(x1, x2) on the lattice.
ScalarField make_field(const Grid& g, const std::function<double(double, double)>& f);
VectorField make_vector_field(const Grid& g,
                              const std::function<double(double, double)>& f1,
                              const std::function<double(double, double)>& f2);

// Pointwise arithmetic used by integrators and rhs assembly.
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double s, const VectorField& a);
VectorField& operator+=(VectorField& a, const VectorField& b);

}  // namespace aht
