#include <cmath>
#include <limits>

#include "gspin/group_reps.hpp"

namespace gspin {

Matrix matrix_exp(const Matrix& m, double t) {
  const Eigen::Index n = m.rows();
  Matrix a = t * m;
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();  // ‖·‖_1
  if (!(norm > 0.0)) return Matrix::Identity(n, n);

  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  a /= std::ldexp(1.0, squarings);

  // Taylor series on ‖A‖_1 <= 1/2; stop once a term no longer changes the sum.
  Matrix sum = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int k = 1; k < 40; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= eps * 0.25 * sum.cwiseAbs().maxCoeff()) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

}  // namespace gspin
