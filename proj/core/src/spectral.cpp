#include "aht/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

#include "aht/errors.hpp"

namespace aht {

namespace {

// FFTW planning is not thread-safe; execution through the new-array API is.
// One unaligned-tolerant plan pair per grid size, created under a lock, then
// reused freely by concurrent callers on their own buffers.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

PlanPair& plans_for(int n) {
    static std::mutex mtx;
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<std::complex<double>> in(static_cast<std::size_t>(n) * n);
    std::vector<std::complex<double>> out(in.size());
    auto* pi = reinterpret_cast<fftw_complex*>(in.data());
    auto* po = reinterpret_cast<fftw_complex*>(out.data());
    PlanPair p;
    // Layout is x1-fastest, so FFTW's (n0, n1) = (n_x2, n_x1).
    p.fwd = fftw_plan_dft_2d(n, n, pi, po, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_2d(n, n, pi, po, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p.fwd || !p.bwd) throw Error("fftw planning failed");
    return cache.emplace(n, p).first->second;
}

}  // namespace

Spectrum forward(const ScalarField& f) {
    const int n = f.grid().n();
    Spectrum s(f.grid());
    std::vector<std::complex<double>> in(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) in[i] = f[i];
    fftw_execute_dft(plans_for(n).fwd,
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(s.c.data()));
    const double scale = 1.0 / static_cast<double>(f.size());
    for (auto& c : s.c) c *= scale;
    return s;
}

ScalarField inverse(const Spectrum& s) {
    const int n = s.grid.n();
    std::vector<std::complex<double>> in(s.c);
    std::vector<std::complex<double>> out(s.c.size());
    fftw_execute_dft(plans_for(n).bwd,
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    ScalarField f(s.grid);
    for (std::size_t i = 0; i < out.size(); ++i) f[i] = out[i].real();
    return f;
}

double conjugate_symmetry_defect(const Spectrum& s) {
    const int n = s.grid.n();
    double max_c = 0.0;
    for (const auto& c : s.c) max_c = std::max(max_c, std::abs(c));
    if (max_c == 0.0) return 0.0;
    double worst = 0.0;
    for (int i2 = 0; i2 < n; ++i2) {
        for (int i1 = 0; i1 < n; ++i1) {
            const int j1 = (n - i1) % n;
            const int j2 = (n - i2) % n;
            worst = std::max(worst, std::abs(s.at(j1, j2) - std::conj(s.at(i1, i2))));
        }
    }
    return worst / max_c;
}

}  // namespace aht
