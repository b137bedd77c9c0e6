#include "nslab/fft3.hpp"

#include <unsupported/Eigen/FFT>
#include <vector>

namespace nslab {

namespace {

// One FFT engine per process; kissfft caches its twiddle plan per length
// inside the engine, so repeated lines of equal length are cheap.
Eigen::FFT<double>& engine() {
    static Eigen::FFT<double> fft;
    return fft;
}

void transform_lines(CArray& a, int N, std::int64_t nlines, bool forward,
                     const std::int64_t* starts, std::int64_t stride) {
    std::vector<Cplx> in(N), out(N);
    auto& fft = engine();
    for (std::int64_t l = 0; l < nlines; ++l) {
        Cplx* base = a.data() + starts[l];
        if (stride == 1) {
            if (forward)
                fft.fwd(out.data(), base, N);
            else
                fft.inv(out.data(), base, N);
            std::copy(out.begin(), out.end(), base);
        } else {
            for (int m = 0; m < N; ++m) in[m] = base[m * stride];
            if (forward)
                fft.fwd(out.data(), in.data(), N);
            else
                fft.inv(out.data(), in.data(), N);
            for (int m = 0; m < N; ++m) base[m * stride] = out[m];
        }
    }
}

}  // namespace

void dft3(CArray& a, int N, bool forward) {
    const std::int64_t NN = std::int64_t(N) * N;
    std::vector<std::int64_t> starts(NN);

    // axis 2: contiguous lines
    for (std::int64_t i = 0; i < N; ++i)
        for (std::int64_t j = 0; j < N; ++j) starts[i * N + j] = (i * N + j) * N;
    transform_lines(a, N, NN, forward, starts.data(), 1);

    // axis 1: stride N
    for (std::int64_t i = 0; i < N; ++i)
        for (std::int64_t k = 0; k < N; ++k) starts[i * N + k] = i * NN + k;
    transform_lines(a, N, NN, forward, starts.data(), N);

    // axis 0: stride N^2
    for (std::int64_t j = 0; j < N; ++j)
        for (std::int64_t k = 0; k < N; ++k) starts[j * N + k] = j * N + k;
    transform_lines(a, N, NN, forward, starts.data(), NN);
}

}  // namespace nslab
