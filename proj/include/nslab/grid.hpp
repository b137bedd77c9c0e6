#pragma once

#include <cstdint>

namespace nslab {

// Uniform periodic grid on the cube [-L/2, L/2)^3, N samples per axis,
// x_i = -L/2 + i*h with h = L/N. The trigonometric basis is e^{2 pi i k.x/L}
// with integer k per axis in [-N/2, N/2); mode k lives at frequency xi = k/L.
struct GridSpec {
    double L = 1.0;
    int N = 8;

    double h() const { return L / N; }
    std::int64_t size() const { return std::int64_t(N) * N * N; }
    double coord(int i) const { return -0.5 * L + h() * i; }

    // DFT storage index -> signed wavenumber
    int wavenumber(int i) const { return i < N / 2 ? i : i - N; }
    double xi(int i) const { return wavenumber(i) / L; }

    // row-major flattening, last axis fastest
    std::int64_t flat(int i, int j, int k) const {
        return (std::int64_t(i) * N + j) * N + k;
    }

    // 2/3-rule band edge: products of fields truncated to |k| <= kcut per axis
    // alias only onto modes beyond kcut, so the retained band stays exact.
    int kcut() const { return N / 3; }
};

// Throws std::invalid_argument unless L > 0 and N is a power of two >= 8.
void validate(const GridSpec& g);

}  // namespace nslab
