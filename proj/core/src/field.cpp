#include "aht/field.hpp"

#include <cmath>

#include "aht/errors.hpp"

namespace aht {

ScalarField::ScalarField(const Grid& g, std::vector<double> values)
    : grid_(g), v_(std::move(values)) {
    if (v_.size() != g.size())
        throw Error("scalar field: value count does not match grid");
    if (!finite()) throw Error("scalar field: non-finite values rejected");
}

bool ScalarField::finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

VectorField::VectorField(ScalarField c1, ScalarField c2)
    : c_{std::move(c1), std::move(c2)} {
    if (c_[0].grid() != c_[1].grid())
        throw Error("vector field: components on different grids");
}

ScalarField make_field(const Grid& g, const std::function<double(double, double)>& f) {
    ScalarField out(g);
    for (int i2 = 0; i2 < g.n(); ++i2)
        for (int i1 = 0; i1 < g.n(); ++i1)
            out.at(i1, i2) = f(g.coord(i1), g.coord(i2));
    return out;
}

VectorField make_vector_field(const Grid& g,
                              const std::function<double(double, double)>& f1,
                              const std::function<double(double, double)>& f2) {
    return VectorField(make_field(g, f1), make_field(g, f2));
}

namespace {
void check_same_grid(const Grid& a, const Grid& b) {
    if (a != b) throw Error("field arithmetic: grid mismatch");
}
}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    check_same_grid(a.grid(), b.grid());
    ScalarField out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    check_same_grid(a.grid(), b.grid());
    ScalarField out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

ScalarField operator*(double s, const ScalarField& a) {
    ScalarField out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
    return out;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
    return VectorField(a.comp(0) + b.comp(0), a.comp(1) + b.comp(1));
}

VectorField operator-(const VectorField& a, const VectorField& b) {
    return VectorField(a.comp(0) - b.comp(0), a.comp(1) - b.comp(1));
}

VectorField operator*(double s, const VectorField& a) {
    return VectorField(s * a.comp(0), s * a.comp(1));
}

VectorField& operator+=(VectorField& a, const VectorField& b) {
    check_same_grid(a.grid(), b.grid());
    for (int j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < a.comp(j).size(); ++i)
            a.comp(j)[i] += b.comp(j)[i];
    return a;
}

}  // namespace aht
