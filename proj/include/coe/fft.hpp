#pragma once

#include "coe/types.hpp"

namespace coe::fft {

/// Unnormalized forward DFT of every column: X_k = sum_j x_j e^{-2 pi i jk/n}.
CMatrix forward_columns(const CMatrix& data);

/// Inverse DFT of every column, normalized by 1/n.
CMatrix inverse_columns(const CMatrix& data);

CVector forward(const CVector& data);
CVector inverse(const CVector& data);

/// In-place 2D DST-I of a real ny x nz array stored row-major (z fastest):
/// Y_jk = 4 sum x_ab sin(pi (a+1)(j+1)/(ny+1)) sin(pi (b+1)(k+1)/(nz+1)).
void dst1_2d(double* data, int ny, int nz);

} // namespace coe::fft
