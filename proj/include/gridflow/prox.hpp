#pragma once

#include <utility>
#include <vector>

#include "gridflow/constraints.hpp"

namespace gridflow {

// Kinetic cost of one (flux, density) pair:
//   |flux|^p / density^(p-1)   for density > 0,
//   0                          for density = flux = 0,
//   +inf                       for density < 0, or density = 0 with flux != 0.
// The infinite branch encodes physical feasibility: flux needs mass to carry it.
double helper_h(double flux, double density, double p);

// Proximal map of kappa * h(m, rho) at the point (rho_tilde, m_tilde):
//   argmin over (rho, m) of  (rho - rho_tilde)^2/2 + (m - m_tilde)^2/2
//                            + kappa * h(m, rho).
// For p = 2 the stationarity system collapses to a scalar cubic in rho,
//   (rho - rho_tilde) * (rho + 2 kappa)^2 = kappa * m_tilde^2,
// whose largest real root is taken; a nonpositive root means the minimiser
// sits at the clamp point (0, 0). General p uses a safeguarded scalar
// root-find and is an experimental path. Throws Error(Usage) for kappa <= 0.
std::pair<double, double> prox_kinetic(double rho_tilde, double m_tilde, double kappa,
                                       double p = 2.0);

// Euclidean projection onto the ball of radius delta around center; operates
// on the slice y[begin, end). delta = 0 projects onto the center point.
void project_ball_inplace(std::vector<double>& y, std::size_t begin, std::size_t end,
                          const std::vector<double>& center, double delta);

// Convenience form for whole vectors (tests, small systems).
std::vector<double> project_ball(const std::vector<double>& y,
                                 const std::vector<double>& center, double delta);

// Proximal map of the convex conjugate of the C_delta indicator, via the
// Moreau identity: out = phi - sigma * Pi_{C_delta}(phi / sigma), with the
// projection applied blockwise on the system's (b_j, delta_j) balls.
// `margin` scales the projection radii: driving the iterates towards
// margin*delta_j keeps finite-iterate residuals strictly inside the stated
// tolerances instead of chattering on the ball boundary.
std::vector<double> prox_dual(const std::vector<double>& phi_in, double sigma,
                              const ConstraintSystem& system, double margin = 1.0);

}  // namespace gridflow
