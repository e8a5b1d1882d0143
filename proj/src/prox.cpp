#include "gridflow/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gridflow/errors.hpp"

namespace gridflow {

double helper_h(double flux, double density, double p) {
    if (density > 0.0) {
        if (p == 2.0) return flux * flux / density;
        return std::pow(std::abs(flux), p) / std::pow(density, p - 1.0);
    }
    if (density == 0.0 && flux == 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
}

namespace {

// Largest real root of x^3 + b x^2 + c x + d, by depressed-cubic closed form
// followed by one Newton polish step.
double cubic_largest_root(double b, double c, double d) {
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const double shift = -b / 3.0;

    double y;
    const double disc = 0.25 * q * q + p * p * p / 27.0;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        y = std::cbrt(-0.5 * q + s) + std::cbrt(-0.5 * q - s);
    } else {
        const double r = std::sqrt(std::max(0.0, -p / 3.0));
        if (r == 0.0) {
            y = 0.0;
        } else {
            const double arg = std::clamp(-0.5 * q / (r * r * r), -1.0, 1.0);
            y = 2.0 * r * std::cos(std::acos(arg) / 3.0);  // largest of the three
        }
    }
    double x = y + shift;

    const double fx = ((x + b) * x + c) * x + d;
    const double dfx = (3.0 * x + 2.0 * b) * x + c;
    if (std::abs(dfx) > 1e-30) x -= fx / dfx;
    return x;
}

// Stationary flux for fixed density: minimises (m - mt)^2/2 + kappa|m|^p /
// rho^(p-1). Monotone scalar equation, bisection on the magnitude.
double inner_flux(double m_tilde, double rho, double kappa, double p) {
    if (m_tilde == 0.0 || rho <= 0.0) return 0.0;
    if (p == 2.0) return m_tilde * rho / (rho + 2.0 * kappa);
    const double target = std::abs(m_tilde);
    const double coef = kappa * p / std::pow(rho, p - 1.0);
    // phi(|m|) = |m| + coef*|m|^(p-1) is increasing; phi(0) may exceed target
    // for p = 1 (soft threshold to zero).
    if (p <= 1.0 && coef >= target) return 0.0;
    double lo = 0.0, hi = target;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double phi = mid + coef * std::pow(mid, p - 1.0);
        (phi < target ? lo : hi) = mid;
    }
    const double mag = 0.5 * (lo + hi);
    return std::copysign(mag, m_tilde);
}

std::pair<double, double> prox_kinetic_general(double rho_tilde, double m_tilde,
                                               double kappa, double p) {
    // Experimental path: outer safeguarded bisection on the density
    // stationarity residual rho - rho_tilde - kappa(p-1)|m|^p / rho^p.
    const double hi0 =
        std::max(rho_tilde, 0.0) + std::pow(kappa, 1.0 / p) * std::abs(m_tilde) + 1.0;
    auto residual = [&](double rho) {
        const double m = inner_flux(m_tilde, rho, kappa, p);
        return rho - rho_tilde -
               kappa * (p - 1.0) * std::pow(std::abs(m), p) / std::pow(rho, p);
    };
    auto objective = [&](double rho, double m) {
        const double dr = rho - rho_tilde, dm = m - m_tilde;
        return 0.5 * dr * dr + 0.5 * dm * dm + kappa * helper_h(m, rho, p);
    };

    double lo = 1e-14 * hi0, hi = hi0;
    if (residual(hi) < 0.0) hi = hi0 * 8.0;  // pathological; widen once
    std::pair<double, double> best{0.0, 0.0};
    double best_obj = objective(0.0, 0.0);
    if (residual(lo) < 0.0 && residual(hi) >= 0.0) {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (residual(mid) < 0.0 ? lo : hi) = mid;
        }
        const double rho = 0.5 * (lo + hi);
        const double m = inner_flux(m_tilde, rho, kappa, p);
        if (objective(rho, m) <= best_obj) best = {rho, m};
    }
    return best;
}

}  // namespace

std::pair<double, double> prox_kinetic(double rho_tilde, double m_tilde, double kappa,
                                       double p) {
    if (!(kappa > 0.0)) throw Error(ErrorKind::Usage, "prox scale must be positive");
    if (p != 2.0) return prox_kinetic_general(rho_tilde, m_tilde, kappa, p);

    if (m_tilde == 0.0)
        return rho_tilde > 0.0 ? std::make_pair(rho_tilde, 0.0) : std::make_pair(0.0, 0.0);

    // (rho - rho_tilde)(rho + 2 kappa)^2 = kappa m_tilde^2, expanded to
    // rho^3 + b rho^2 + c rho + d = 0.
    const double b = 4.0 * kappa - rho_tilde;
    const double c = 4.0 * kappa * (kappa - rho_tilde);
    const double d = -(4.0 * kappa * kappa * rho_tilde + kappa * m_tilde * m_tilde);
    const double rho = cubic_largest_root(b, c, d);
    if (rho <= 0.0) return {0.0, 0.0};
    return {rho, m_tilde * rho / (rho + 2.0 * kappa)};
}

void project_ball_inplace(std::vector<double>& y, std::size_t begin, std::size_t end,
                          const std::vector<double>& center, double delta) {
    double dist2 = 0.0;
    for (std::size_t r = begin; r < end; ++r) {
        const double d = y[r] - center[r];
        dist2 += d * d;
    }
    const double dist = std::sqrt(dist2);
    if (dist <= delta) return;
    if (dist == 0.0) return;  // delta < 0 cannot happen; dist==0 => inside
    const double f = delta / dist;
    for (std::size_t r = begin; r < end; ++r)
        y[r] = center[r] + (y[r] - center[r]) * f;
}

std::vector<double> project_ball(const std::vector<double>& y,
                                 const std::vector<double>& center, double delta) {
    if (y.size() != center.size())
        throw Error(ErrorKind::Usage, "projection: center size mismatch");
    std::vector<double> out = y;
    project_ball_inplace(out, 0, out.size(), center, delta);
    return out;
}

std::vector<double> prox_dual(const std::vector<double>& phi_in, double sigma,
                              const ConstraintSystem& system, double margin) {
    if (!(sigma > 0.0)) throw Error(ErrorKind::Usage, "dual step must be positive");
    if (phi_in.size() != system.rows())
        throw Error(ErrorKind::Usage, "dual prox: vector length does not match rows");

    std::vector<double> z(phi_in.size());
    for (std::size_t r = 0; r < z.size(); ++r) z[r] = phi_in[r] / sigma;
    for (const auto& blk : system.blocks())
        project_ball_inplace(z, blk.begin, blk.end, system.rhs(), margin * blk.delta);

    std::vector<double> out(phi_in.size());
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = phi_in[r] - sigma * z[r];
    return out;
}

}  // namespace gridflow
