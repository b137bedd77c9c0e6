#include "nslab/weighted.hpp"

#include <cmath>

#include "nslab/norms.hpp"
#include "nslab/spectral_ops.hpp"

namespace nslab {

namespace {

// A[c] = integral of |v|^{-2} over the unit cube centered at offset c,
// c in {-1,0,1}^3. The 26 off-center cells are smooth and handled by dense
// midpoint; the center cell follows from the 3x3x3 self-similarity of r^{-2}:
// splitting it into 27 third-size cells gives A0 = sum(neighbors)/3 + A0/3.
struct CellTable {
    double A[3][3][3] = {};

    CellTable() {
        const int M = 48;
        double sum_off = 0.0;
        for (int ci = -1; ci <= 1; ++ci)
            for (int cj = -1; cj <= 1; ++cj)
                for (int ck = -1; ck <= 1; ++ck) {
                    if (ci == 0 && cj == 0 && ck == 0) continue;
                    double acc = 0.0;
                    for (int a = 0; a < M; ++a) {
                        double x = ci - 0.5 + (a + 0.5) / M;
                        for (int b = 0; b < M; ++b) {
                            double y = cj - 0.5 + (b + 0.5) / M;
                            for (int c = 0; c < M; ++c) {
                                double z = ck - 0.5 + (c + 0.5) / M;
                                acc += 1.0 / (x * x + y * y + z * z);
                            }
                        }
                    }
                    double v = acc / (double(M) * M * M);
                    A[ci + 1][cj + 1][ck + 1] = v;
                    sum_off += v;
                }
        A[1][1][1] = 0.5 * sum_off;
    }
};

const CellTable& cell_table() {
    static const CellTable t;
    return t;
}

}  // namespace

SingularRatio weighted_singular_ratio(const ScalarField& f, int yi, int yj, int yk) {
    const GridSpec& g = f.grid;
    const int N = g.N;
    const double h = g.h();
    const double cell = h * h * h;
    const CellTable& tab = cell_table();

    double acc = 0.0;
    std::int64_t idx = 0;
    for (int i = 0; i < N; ++i) {
        int di = i - yi;
        di -= N * std::lround(double(di) / N);  // min-image index offset
        double dx = di * h;
        for (int j = 0; j < N; ++j) {
            int dj = j - yj;
            dj -= N * std::lround(double(dj) / N);
            double dy = dj * h;
            for (int k = 0; k < N; ++k, ++idx) {
                int dk = k - yk;
                dk -= N * std::lround(double(dk) / N);
                double dz = dk * h;
                double f2 = f.v[idx] * f.v[idx];
                if (std::abs(di) <= 1 && std::abs(dj) <= 1 && std::abs(dk) <= 1)
                    acc += f2 * h * tab.A[di + 1][dj + 1][dk + 1];
                else
                    acc += f2 * cell / (dx * dx + dy * dy + dz * dz);
            }
        }
    }

    SingularRatio r;
    r.integral = acc;
    SpectralScalar s = to_spectral(f);
    double grad = h1_seminorm(s);
    r.bound = 4.0 * grad * grad;
    r.ratio = r.bound > 0.0 ? r.integral / r.bound : 0.0;
    return r;
}

double tail_energy(const VectorField& u, double R) {
    const GridSpec& g = u.grid;
    const double cell = g.h() * g.h() * g.h();
    double acc = 0.0;
    std::int64_t idx = 0;
    for (int i = 0; i < g.N; ++i) {
        double x = g.coord(i);
        for (int j = 0; j < g.N; ++j) {
            double y = g.coord(j);
            for (int k = 0; k < g.N; ++k, ++idx) {
                double z = g.coord(k);
                if (x * x + y * y + z * z > R * R)
                    acc += u.v[0][idx] * u.v[0][idx] + u.v[1][idx] * u.v[1][idx] +
                           u.v[2][idx] * u.v[2][idx];
            }
        }
    }
    return acc * cell;
}

}  // namespace nslab
