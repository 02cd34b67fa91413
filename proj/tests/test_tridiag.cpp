#include <random>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "pulse/tridiag.hpp"

using namespace pulse;

namespace {

struct System {
  std::vector<double> lower, diag, upper, rhs;
};

System random_system(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  System s{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    s.lower[i] = u(rng);
    s.upper[i] = u(rng);
    s.diag[i] = 3.0 + u(rng);
    s.rhs[i] = u(rng);
  }
  return s;
}

}  // namespace

TEST_CASE("tridiagonal solve matches a dense solve") {
  for (int n : {1, 2, 5, 40}) {
    const System s = random_system(n, 11 + n);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
      a(i, i) = s.diag[i];
      if (i > 0) a(i, i - 1) = s.lower[i];
      if (i + 1 < n) a(i, i + 1) = s.upper[i];
      b[i] = s.rhs[i];
    }
    const Eigen::VectorXd ref = a.lu().solve(b);
    std::vector<double> x = s.rhs;
    Tridiagonal(s.lower, s.diag, s.upper).solve(x);
    for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }
}

TEST_CASE("cyclic tridiagonal solve matches a dense solve") {
  for (int n : {3, 4, 17, 64}) {
    const System s = random_system(n, 97 + n);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
      a(i, i) += s.diag[i];
      a(i, (i + n - 1) % n) += s.lower[i];
      a(i, (i + 1) % n) += s.upper[i];
      b[i] = s.rhs[i];
    }
    const Eigen::VectorXd ref = a.lu().solve(b);
    std::vector<double> x = s.rhs;
    CyclicTridiagonal(s.lower, s.diag, s.upper).solve(x);
    for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-11));
  }
}
