#pragma once

#include <Eigen/Dense>
#include <complex>

#include "nslab/grid.hpp"

namespace nslab {

using Cplx = std::complex<double>;
using CArray = Eigen::ArrayXcd;
using RArray = Eigen::ArrayXd;

// 3D DFT over the flat row-major (i*N+j)*N+k layout, one axis at a time.
// Forward is the plain unnormalized DFT; inverse carries the full 1/N^3.
// Line transforms share one kissfft plan per length.
void dft3(CArray& a, int N, bool forward);

}  // namespace nslab
