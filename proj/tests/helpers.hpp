#pragma once

#include <doctest.h>

#include "qlocality/channels.hpp"

namespace qloc::test {

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline ComplexMatrix eye(long d) { return ComplexMatrix::Identity(d, d); }

inline ComplexMatrix pauli_x() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = Complex(0, -1);
  m(1, 0) = Complex(0, 1);
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

inline ComplexVector ket(long d, long k) {
  ComplexVector v = ComplexVector::Zero(d);
  v(k) = 1.0;
  return v;
}

inline ComplexMatrix random_matrix(long rows, long cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) m(i, j) = rng.complex_normal();
  return m;
}

inline SystemLayout layout3(int a, int b, int c) {
  return SystemLayout{{"q0", a}, {"q1", b}, {"q2", c}};
}

inline SystemLayout layout2(int a, int c) { return SystemLayout{{"q0", a}, {"q1", c}}; }

}  // namespace qloc::test
