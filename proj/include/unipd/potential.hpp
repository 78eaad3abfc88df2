#ifndef UNIPD_POTENTIAL_HPP
#define UNIPD_POTENTIAL_HPP

#include "unipd/solver.hpp"

namespace unipd::solver {

/// Lyapunov potential of the unified update at reference (ref_x, ref_y):
///
///   0.5 ||z^k - z||^2_{Lambda^-1} + (c/2) ||z^k - z^{k-1}||^2_{Lambda^-1}
///     + <F(z^k) - F(z^{k-1}), z - z^k>_{Xi Theta} + (mu - beta) <grad_y Psi(z^k), y^k - y>
///
/// with Lambda = diag(tau I, sigma I), Theta = diag(alpha I, beta I),
/// Xi = diag(I, mu I). z^{k-1} and F(z^{k-1}) are taken from the state.
double potential(const ConicProblem& p, const SolverParams& params, const IterateState& st, const Vec& ref_x,
                 const Vec& ref_y, double c);

}  // namespace unipd::solver

#endif  // UNIPD_POTENTIAL_HPP
