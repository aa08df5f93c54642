#pragma once

#include <complex>

#include "subwave/types.hpp"

namespace subwave {

struct SumResult {
    cplx value{};
    double est_error = 0.0;
    int terms_used = 0;
};

// Digamma for real x > 0 (recurrence + asymptotic series).
double digamma(double x);

// Phi(z, a) = sum_{k>=0} z^k/(k+a) with z = e^{i theta}, a > 0.
// theta is reduced mod 2pi and must not be 0 (the series diverges there).
// Small |theta| uses the Bernoulli-polynomial expansion of the singular
// part; elsewhere the log-split remainder is summed with Levin-u over
// half-period blocks (iterated-Aitken fallback).
SumResult lerch_phi(double theta, double a, double tol = 1e-12,
                    int term_budget = 100000);

// sum_{m in Z} e^{i alpha m L} / |d - m L| for 0 < d < L, via two Lerch
// series; alpha*L must not be 0 mod 2pi.
SumResult axis_lattice_sum(double d, double alpha, const Lattice& lat,
                           double tol = 1e-10, int term_budget = 100000);

// sum_{m != 0} e^{i alpha m L} / |m L|  (closed form: (2/L) ln|2 sin(alpha L/2)|
// as the real part; the odd part cancels).
double translate_diag_sum(double alpha, const Lattice& lat);

// Quasiperiodic Green's function G^alpha(x) = sum_m e^{i alpha m L} *
// (-1/(4pi |x - m L e1|)). x must avoid every lattice translate of 0.
// On-axis x routes through the Lerch machinery (uniform in alpha);
// generic x sums two one-sided tails with blocked Levin-u.
SumResult greens_alpha(const Vec3& x, double alpha, const Lattice& lat,
                       double tol = 1e-10, int term_budget = 100000);

// Tail bound for the raw (unaccelerated) axis series after M terms per side;
// used to size term budgets and exercised by the oracle tests.
double axis_tail_bound(int M, double alpha, const Lattice& lat);

} // namespace subwave
