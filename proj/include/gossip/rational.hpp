#pragma once

#include <Eigen/Dense>
#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace Eigen {

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
  typedef mpq_class Real;
  typedef mpq_class NonInteger;
  typedef mpq_class Nested;

  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }

  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
};

}  // namespace Eigen

namespace gossip {

using Rational = mpq_class;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Row = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
template <typename Scalar>
using Col = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RMat = Mat<Rational>;
using RRow = Row<Rational>;
using RCol = Col<Rational>;
using DMat = Mat<double>;
using DRow = Row<double>;
using DCol = Col<double>;

/// Parses "p/q" or "p" into a canonicalized rational.
inline Rational parse_rational(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("invalid rational: '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline double to_double(const Rational& q) { return q.get_d(); }

inline DMat to_double(const RMat& A) {
  DMat B(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) B(i, j) = A(i, j).get_d();
  return B;
}

inline DRow to_double(const RRow& v) {
  DRow r(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) r(i) = v(i).get_d();
  return r;
}

}  // namespace gossip
