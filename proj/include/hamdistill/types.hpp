#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hd {

using cplx = std::complex<double>;
using cmat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using cvec = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;

// Error classes. DomainError maps to CLI exit code 1, the rest to 2.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Kernel execution policy. Serial variants are kept as references for tests.
enum class Exec { serial, parallel };

inline std::size_t pow2(int k) { return std::size_t{1} << k; }

}  // namespace hd
