#pragma once

#include <functional>
#include <vector>

namespace steklov {
namespace oracle {

/// Modified Bessel function I_n(x) by power series, truncated when a term
/// falls below 1e-17 of the partial sum. Intended for n ≥ 0, moderate x.
double bessel_i(int n, double x);

/// I_n'(x) via I_0' = I_1 and I_n' = (I_{n−1} + I_{n+1})/2.
double bessel_i_prime(int n, double x);

/// Steklov-type eigenvalue of the radius-R disk for angular order n:
/// λ = I_n'(R)/I_n(R). Multiplicity 1 for n = 0, 2 for n ≥ 1.
double disk_eigenvalue(int n, double R);

/// First k disk eigenvalues as a sorted multiset (multiplicities included).
std::vector<double> disk_spectrum(double R, int k);

/// dλ/dR for the radius-R disk, analytic via the Bessel ODE:
/// (1 + n²/R²) − λ/R − λ². Reduces to 1 − λ − λ² at n = 0, R = 1.
double disk_dilation_derivative(int n, double R);

struct DiffResult {
  double derivative = 0.0;
  double error_estimate = 0.0;  // magnitude of the last extrapolation correction
};

/// Central differences of f around 0 with step halving and Richardson
/// extrapolation; evaluates f at ±ε₀/2^i, i = 0..levels−1.
DiffResult richardson_diff(const std::function<double(double)>& f, double eps0,
                           int levels = 4);

}  // namespace oracle
}  // namespace steklov
