#pragma once

#include "spcam/core.hpp"

namespace spcam {

enum class Direction { forward, inverse };

/// Default cap on dense matrix construction; dense matrices are meant for
/// tests and small sizes only.
inline constexpr std::size_t kDenseLimit = 4096;

/// Dense unitary noiselet matrix N_n built by the Kronecker recursion
///   N_1 = [1],  N_2n = 1/2 [[1-i, 1+i], [1+i, 1-i]] (x) N_n.
/// All entries are dyadic rationals times {1,-1,i,-i} (even q) or {+-1+-i}
/// (odd q), so the matrix is exact in double precision.
ComplexField dense_noiselet(NoiseletOrder order, std::size_t dense_limit = kDenseLimit);

/// Fast noiselet transform, O(n log n). forward computes N_n . v, inverse
/// computes N_n^H . v; the two compose to the identity.
ComplexField fnt(const ComplexField& v, NoiseletOrder order, Direction dir);
void fnt_inplace(ComplexField& v, Direction dir);

/// 2D transform of an r x c matrix (both sides powers of two):
/// forward is N_r . A . N_c^T, which on the row-major buffer coincides with
/// the length r*c 1D transform.
ComplexField fnt2d(const ComplexField& a, Direction dir);
void fnt2d_inplace(ComplexField& a, Direction dir);

/// Mirror index of row j (1-based): row j of N_n is the elementwise complex
/// conjugate of row n+1-j.
std::size_t mirror_row(std::size_t j, NoiseletOrder order);

/// Modified noiselet transform Ntilde_n . v computed purely with integer
/// additions and subtractions:
///   Ntilde_1 = [1+i],  Ntilde_2n = [[1, i], [i, 1]] (x) Ntilde_n,
/// evaluated as q butterfly stages (u,w) -> (u+iw, w+iu) on split re/im
/// planes followed by one (1+i) rotation pass (re' = re - im, im' = re + im).
/// Rejects inputs whose magnitude could overflow the integer width.
IntComplexField modified_fnt(const IntComplexField& v, NoiseletOrder order);

namespace detail {
/// Butterfly stages + rotation without the overflow precondition. Callers
/// must guarantee that intermediates fit; for inputs whose entries are sums
/// of distinct powers of two up to 2^l (bit-packed unit vectors), every
/// intermediate stays below 2^(l+1).
void modified_fnt_unchecked(std::int64_t* re, std::int64_t* im, std::size_t n);
}  // namespace detail

/// Max-abs deviation of Ntilde_n from sqrt(2n) . exp(i pi (q+1)/4) . N_n,
/// with Ntilde built column-by-column through the integer transform.
/// Exact zero is expected; exposed for the test suite.
double verify_modified_relation(NoiseletOrder order, std::size_t dense_limit = kDenseLimit);

/// Phase factor exp(i pi (q+1)/4) scaled by sqrt(2n); exact in double.
std::complex<double> modified_scale(NoiseletOrder order);

}  // namespace spcam
