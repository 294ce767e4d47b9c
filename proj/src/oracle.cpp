#include "steklov/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace steklov {
namespace oracle {

double bessel_i(int n, double x) {
  if (n < 0) throw std::invalid_argument("bessel order must be nonnegative");
  if (!(x > 0.0)) throw std::invalid_argument("bessel argument must be positive");
  const double half = 0.5 * x;
  // first term (x/2)^n / n!
  double term = 1.0;
  for (int i = 1; i <= n; ++i) term *= half / i;
  double sum = term;
  for (int m = 1; m < 400; ++m) {
    term *= half * half / (m * double(m + n));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

double bessel_i_prime(int n, double x) {
  if (n == 0) return bessel_i(1, x);
  return 0.5 * (bessel_i(n - 1, x) + bessel_i(n + 1, x));
}

double disk_eigenvalue(int n, double R) {
  return bessel_i_prime(n, R) / bessel_i(n, R);
}

std::vector<double> disk_spectrum(double R, int k) {
  std::vector<double> values;
  values.push_back(disk_eigenvalue(0, R));
  for (int n = 1; static_cast<int>(values.size()) < k; ++n) {
    const double lam = disk_eigenvalue(n, R);
    values.push_back(lam);
    values.push_back(lam);
  }
  std::sort(values.begin(), values.end());
  values.resize(k);
  return values;
}

double disk_dilation_derivative(int n, double R) {
  // d/dR [I_n'/I_n] with I_n'' = (1 + n²/R²) I_n − I_n'/R from the ODE
  const double lam = disk_eigenvalue(n, R);
  return (1.0 + double(n) * n / (R * R)) - lam / R - lam * lam;
}

DiffResult richardson_diff(const std::function<double(double)>& f, double eps0,
                           int levels) {
  if (levels < 1) throw std::invalid_argument("richardson levels must be >= 1");
  std::vector<double> row(levels);
  std::vector<double> prev(levels);
  double correction = 0.0;
  for (int i = 0; i < levels; ++i) {
    const double eps = eps0 / double(1 << i);
    row[0] = (f(eps) - f(-eps)) / (2.0 * eps);
    for (int j = 1; j <= i; ++j) {
      const double p4 = std::pow(4.0, j);
      row[j] = row[j - 1] + (row[j - 1] - prev[j - 1]) / (p4 - 1.0);
    }
    if (i > 0) correction = std::abs(row[i] - row[i - 1]);
    std::swap(row, prev);
  }
  return {prev[levels - 1], correction};
}

}  // namespace oracle
}  // namespace steklov
