#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the analytic engine.

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "relaxosc/circuit_params.hpp"
#include "relaxosc/switch_model.hpp"

namespace relaxosc::testing {

inline SwitchParams reference_switch() { return SwitchParams::create(4.0, 2.0, 200.0, 40000.0); }

/// I0 = 150 uA, C1 = 10 nF, C2 = 1 uF.
inline CircuitParams fig5_circuit(double r, double c1 = 10e-9) {
    return CircuitParams::create(reference_switch(), 150e-6, c1, 1e-6, r);
}

/// I0 = 3 mA, C1 = 10 nF, C2 = 1 uF, R = 100 ohm.
inline CircuitParams fig3_circuit() { return CircuitParams::create(reference_switch(), 3e-3, 10e-9, 1e-6, 100.0); }

struct Eigenpair {
    double slow;  // smaller decay rate
    double fast;
};

/// Decay rates of y' = M y with M = [[m11, m12], [m21, m22]] from the roots
/// of the characteristic polynomial l^2 - tr l + det (real roots assumed).
inline Eigenpair decay_rates(double m11, double m12, double m21, double m22) {
    const double tr = m11 + m22;
    const double det = m11 * m22 - m12 * m21;
    const double disc = std::sqrt(tr * tr - 4.0 * det);
    const double l1 = 0.5 * (tr + disc);
    const double l2 = 0.5 * (tr - disc);
    return {-l1, -l2};
}

/// Cramer's rule for [[a, b], [c, d]] x = (e, f).
inline std::pair<double, double> solve2(double a, double b, double c, double d, double e, double f) {
    const double det = a * d - b * c;
    return {(e * d - b * f) / det, (a * f - e * c) / det};
}

/// Time for an RC node fed by i0 through r (asymptote i0 r) to go from u_from
/// to u_to.
inline double rc_time(double r, double c0, double i0, double u_from, double u_to) {
    const double v_inf = i0 * r;
    return r * c0 * std::log((v_inf - u_from) / (v_inf - u_to));
}

/// Single-capacitor period written out from the charging law.
inline double single_cap_period(const SwitchParams& p, double i0, double c0) {
    return rc_time(p.r_off(), c0, i0, p.u_h(), p.u_th()) + rc_time(p.r_on(), c0, i0, p.u_th(), p.u_h());
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

/// Random valid circuit over the ranges used by the equivalence checks:
/// c1 in [1, 100] nF, c2 in [0.1, 10] uF, r in [1, 1000] ohm, i0 in
/// [1.5 i_th, 0.5 i_h] for the reference switch, all log-uniform.
inline CircuitParams random_circuit(std::mt19937_64& rng) {
    const SwitchParams sw = reference_switch();
    const double c1 = log_uniform(rng, 1e-9, 100e-9);
    const double c2 = log_uniform(rng, 0.1e-6, 10e-6);
    const double r = log_uniform(rng, 1.0, 1000.0);
    const double i0 = log_uniform(rng, 1.5e-4, 5e-3);
    return CircuitParams::create(sw, i0, c1, c2, r);
}

struct Residual {
    double r1, r2;        // central-difference derivative minus right-hand side
    double s1, s2;        // size of the right-hand-side terms

    double worst() const { return std::max(std::abs(r1) / s1, std::abs(r2) / s2); }
};

/// Residual of dU1/dt = a1 (v0 - b U1 - U2), dU2/dt = a2 (v0 - U1 - U2) for a
/// trajectory u(t) -> (U1, U2), by central differences of half-width 3e-4 t.
template <class Trajectory>
Residual ode_residual(Trajectory u, double a1, double a2, double b, double v0, double t) {
    const double h = 3e-4 * t;
    const auto [u1_lo, u2_lo] = u(t - h);
    const auto [u1_hi, u2_hi] = u(t + h);
    const auto [u1, u2] = u(t);
    Residual r{};
    r.r1 = (u1_hi - u1_lo) / (2.0 * h) - a1 * (v0 - b * u1 - u2);
    r.r2 = (u2_hi - u2_lo) / (2.0 * h) - a2 * (v0 - u1 - u2);
    r.s1 = a1 * (std::abs(v0) + b * std::abs(u1) + std::abs(u2));
    r.s2 = a2 * (std::abs(v0) + std::abs(u1) + std::abs(u2));
    return r;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace relaxosc::testing
