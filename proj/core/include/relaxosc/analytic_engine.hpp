#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <utility>

#include "relaxosc/circuit_params.hpp"
#include "relaxosc/errors.hpp"
#include "relaxosc/waveform.hpp"

namespace relaxosc {

// Exact solution of the two-capacitor oscillator. Within one switch state the
// capacitor voltages obey a linear system
//
//   dU1/dt = a1 (v0 - b U1 - U2)
//   dU2/dt = a2 (v0 - U1 - U2)
//
// with a1 = 1/(r_sw c1), a2 = 1/(r_sw c2), b = (r + r_sw)/r, v0 = r_sw i0,
// whose general solution is
//
//   U1(t) = -a1 (m1 e^{-alpha1 t} + m2 e^{-alpha2 t})
//   U2(t) = v0 + m1 beta1 e^{-alpha1 t} + m2 beta2 e^{-alpha2 t}.
//
// A PhasePiece holds the coefficients of one such segment plus its initial
// condition. The switching instants are the roots of U1 + U2 = level.

/// One exponential segment of the piecewise solution. Times passed to
/// eval_phase are local (0 at t_start).
///
/// When `shorted` is set the piece is the reduced single-capacitor model used
/// for r = 0: C1 is short-circuited, U1 == 0 and U2 relaxes toward v0 at rate
/// a2 with C0 = c2. In that case only a2, v0 and m1 (= u20 - v0) are used.
struct PhasePiece {
    SwitchState state = SwitchState::Off;
    bool shorted = false;
    double r_sw = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double b = 0.0;
    double v0 = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double d = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    double u10 = 0.0;
    double u20 = 0.0;
    double t_start = 0.0;
};

struct SolutionCoefficients {
    double m1;
    double m2;
};

struct PhaseValue {
    double u1;
    double u2;
    double usw;
};

/// Coefficients for the segment with the switch in `state` (m1/m2 unset).
/// Throws DegenerateResistance when c.r() == 0; use reduced_phase_params.
PhasePiece phase_params(const CircuitParams& c, SwitchState state);

/// Single-capacitor segment (C1 shorted, C0 = c2) for r = 0.
PhasePiece reduced_phase_params(const CircuitParams& c, SwitchState state);

/// Routes r = 0 to the reduced model, everything else to phase_params.
PhasePiece segment_params(const CircuitParams& c, SwitchState state);

/// Solution coefficients reproducing (u10, u20) at local time 0.
SolutionCoefficients fit_initial(const PhasePiece& piece, double u10, double u20) noexcept;

/// Copy of `piece` started from (u10, u20) at absolute time t_start.
PhasePiece start_piece(PhasePiece piece, double u10, double u20, double t_start = 0.0) noexcept;

PhaseValue eval_phase(const PhasePiece& piece, double t) noexcept;

/// Smallest local time t in (0, t_max] with usw(t) == level.
///
/// usw - level = A e^{-alpha1 t} + B e^{-alpha2 t} + C has at most one
/// stationary point, so [0, t*] and [t*, inf) are monotone. The first
/// crossing is bracketed on those segments and refined by bisection to the
/// resolution of double precision. Throws NoCrossing when usw never reaches
/// the level before t_max and DomainError when usw(0) == level.
double crossing_time(const PhasePiece& piece, double level,
                     double t_max = std::numeric_limits<double>::infinity());

struct StartupTransient {
    double t0;
    double u10;
    double u20;
    PhasePiece piece;
};

/// OFF segment from discharged capacitors up to the first turn-on.
StartupTransient startup_transient(const CircuitParams& c);

/// One application of the cycle map: ON segment from (u10, u20) down to u_h,
/// then OFF segment up to u_th.
struct CycleStep {
    double t1;
    double t2;
    double u10_next;
    double u20_next;
    PhasePiece on_piece;
    PhasePiece off_piece;
};

CycleStep cycle_map(const CircuitParams& c, double u10, double u20);

struct LimitCycleOptions {
    double tol = 1e-10;
    std::size_t max_cycles = 1000;
};

struct CycleSolution {
    double t0 = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    double f = 0.0;
    double u10_cycle = 0.0;
    double u20_cycle = 0.0;
    PhasePiece on_piece;
    PhasePiece off_piece;
    bool converged = false;
    std::size_t iterations = 0;

    double period() const noexcept { return t1 + t2; }
};

/// Thrown by limit_cycle after max_cycles; carries the last iterate.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, CycleSolution last)
        : Error(what), last_(std::move(last)) {}

    const CycleSolution& last_iterate() const noexcept { return last_; }

private:
    CycleSolution last_;
};

/// Periodic steady state. The turn-on state is pinned to usw = u_th, so the
/// cycle map reduces to a scalar map of u10; its fixed point is found with
/// secant steps safeguarded by plain iteration. Converged once both the map
/// residual and the last step are below tol * u_th.
CycleSolution limit_cycle(const CircuitParams& c, const LimitCycleOptions& options = {});

/// Samples t = k*dt, k = 0..floor(t_end/dt), of the exact trajectory from
/// power-on, stitched segment by segment.
Waveform sample_waveform(const CircuitParams& c, double t_end, double dt);

}  // namespace relaxosc
