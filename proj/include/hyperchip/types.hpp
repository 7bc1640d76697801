#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hyperchip {

using Real = double;
using Complex = std::complex<Real>;

template <typename Scalar, int Rows, int Cols>
using Mat = Eigen::Matrix<Scalar, Rows, Cols>;

template <typename Scalar>
using Mat2 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;
template <typename Scalar>
using Mat4 = Eigen::Matrix<std::complex<Scalar>, 4, 4>;
template <typename Scalar>
using Vec2 = Eigen::Matrix<std::complex<Scalar>, 2, 1>;
template <typename Scalar>
using Vec4 = Eigen::Matrix<std::complex<Scalar>, 4, 1>;

using Matrix2c = Mat2<Real>;
using Matrix4c = Mat4<Real>;
using Vector2c = Vec2<Real>;
using Vector4c = Vec4<Real>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
using Matrix16c = Eigen::Matrix<Complex, 16, 16>;
using Vector16c = Eigen::Matrix<Complex, 16, 1>;

inline constexpr Real kPi = std::numbers::pi_v<Real>;

/// Raised for precondition violations on physical inputs (bad modes, stage
/// mismatches, non-unitary settings, incomplete data).
class PhysicsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Kronecker product for small dense operands. Eigen's own lives in
// unsupported/, and we only ever need the dense 2x2 / 4x4 case.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a,
          const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                            a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace pauli {

template <typename Scalar = Real>
Mat2<Scalar> identity() {
  return Mat2<Scalar>::Identity();
}

template <typename Scalar = Real>
Mat2<Scalar> x() {
  Mat2<Scalar> m;
  m << 0, 1, 1, 0;
  return m;
}

template <typename Scalar = Real>
Mat2<Scalar> y() {
  using C = std::complex<Scalar>;
  Mat2<Scalar> m;
  m << C(0, 0), C(0, -1), C(0, 1), C(0, 0);
  return m;
}

template <typename Scalar = Real>
Mat2<Scalar> z() {
  Mat2<Scalar> m;
  m << 1, 0, 0, -1;
  return m;
}

template <typename Scalar = Real>
Mat2<Scalar> hadamard() {
  const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
  Mat2<Scalar> m;
  m << s, s, s, -s;
  return m;
}

}  // namespace pauli

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, Real tol = 1e-10) {
  if (u.rows() != u.cols()) return false;
  const auto id = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic,
                                Eigen::Dynamic>::Identity(u.rows(), u.cols());
  return ((u.adjoint() * u) - id).cwiseAbs().maxCoeff() < tol;
}

}  // namespace hyperchip
