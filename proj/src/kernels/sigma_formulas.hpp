#pragma once

// Principal-minor expressions for sigma_1..sigma_n of 3x3 and 4x4 symmetric
// matrices, written once over a generic lane type V (double, or a SIMD
// register wrapper providing +, -, *). Every variant therefore evaluates the
// same expression tree in the same order; no fused multiply-add is used.
//
// Packed input order (upper triangle, row-major):
//   dim 3: m00 m01 m02 m11 m12 m22
//   dim 4: m00 m01 m02 m03 m11 m12 m13 m22 m23 m33

namespace s2lab::kernels::detail {

// det [[a d e] [d b f] [e f c]]
template <class V>
inline V det3(const V& a, const V& b, const V& c, const V& d, const V& e, const V& f) {
  return a * (b * c - f * f) - d * (d * c - f * e) + e * (d * f - b * e);
}

template <class V>
inline void sigma_dim3(const V* m, V* out) {
  const V& m00 = m[0];
  const V& m01 = m[1];
  const V& m02 = m[2];
  const V& m11 = m[3];
  const V& m12 = m[4];
  const V& m22 = m[5];
  out[0] = m00 + m11 + m22;
  out[1] = (m00 * m11 - m01 * m01) + (m00 * m22 - m02 * m02) + (m11 * m22 - m12 * m12);
  out[2] = det3(m00, m11, m22, m01, m02, m12);
}

template <class V>
inline void sigma_dim4(const V* m, V* out) {
  const V& m00 = m[0];
  const V& m01 = m[1];
  const V& m02 = m[2];
  const V& m03 = m[3];
  const V& m11 = m[4];
  const V& m12 = m[5];
  const V& m13 = m[6];
  const V& m22 = m[7];
  const V& m23 = m[8];
  const V& m33 = m[9];

  out[0] = (m00 + m11) + (m22 + m33);

  out[1] = ((m00 * m11 - m01 * m01) + (m00 * m22 - m02 * m02) + (m00 * m33 - m03 * m03)) +
           ((m11 * m22 - m12 * m12) + (m11 * m33 - m13 * m13) + (m22 * m33 - m23 * m23));

  out[2] = (det3(m11, m22, m33, m12, m13, m23) + det3(m00, m22, m33, m02, m03, m23)) +
           (det3(m00, m11, m33, m01, m03, m13) + det3(m00, m11, m22, m01, m02, m12));

  // Laplace expansion along rows {0,1} against rows {2,3}.
  const V s0 = m00 * m11 - m01 * m01;
  const V s1 = m00 * m12 - m01 * m02;
  const V s2 = m00 * m13 - m01 * m03;
  const V s3 = m01 * m12 - m11 * m02;
  const V s4 = m01 * m13 - m11 * m03;
  const V s5 = m02 * m13 - m12 * m03;

  const V c5 = m22 * m33 - m23 * m23;
  const V c4 = m12 * m33 - m13 * m23;
  const V c3 = m12 * m23 - m13 * m22;
  const V c2 = m02 * m33 - m03 * m23;
  const V c1 = m02 * m23 - m03 * m22;
  const V c0 = m02 * m13 - m03 * m12;

  out[3] = (s0 * c5 - s1 * c4 + s2 * c3) + (s3 * c2 - s4 * c1 + s5 * c0);
}

}  // namespace s2lab::kernels::detail
