#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "relaxosc/circuit_params.hpp"
#include "relaxosc/waveform.hpp"

namespace relaxosc {

// Independent time-stepping path for the oscillator. Integrates the Kirchhoff
// current balance directly,
//
//   C2 dU2/dt = i0 - (U1 + U2)/r_sw
//   C1 dU1/dt = i0 - (U1 + U2)/r_sw - U1/r
//
// with classical fixed-step RK4 and localizes switching events inside a step.
// Shares no code with the exponential solution in analytic_engine.

/// Largest step allowed relative to the fastest eigenvalue of either phase.
inline constexpr double kStepGuard = 0.05;
/// Default step relative to the fastest eigenvalue.
inline constexpr double kDefaultStepFraction = 0.02;

/// Fastest decay rate (1/s) of the linear system over both switch states at
/// control resistance r. Infinite for r == 0.
double fastest_rate(const CircuitParams& c, double r);

/// kDefaultStepFraction / fastest_rate at the circuit's own r.
double default_step(const CircuitParams& c);

/// What to do when dt cannot resolve the C1-R shunt at the current r.
enum class StiffPolicy {
    /// Throw StepTooLarge.
    Reject,
    /// Eliminate U1 adiabatically (quasi-static U1 = r (i0 r_sw - U2)/(r + r_sw))
    /// for steps where the guard fails. Exact in the r -> 0 limit.
    Reduce,
};

/// Incremental integrator state for one oscillator.
class OscillatorStepper {
public:
    OscillatorStepper(const CircuitParams& c, StiffPolicy policy);

    /// Advances to t_next under control resistance r (held constant over the
    /// step). Switching events inside the step are appended to `events`.
    void advance_to(double t_next, double r, std::vector<SwitchEvent>& events);

    double time() const noexcept { return t_; }
    double u1() const noexcept { return u1_; }
    double u2() const noexcept { return u2_; }
    double usw() const noexcept { return u1_ + u2_; }
    SwitchState state() const noexcept { return state_; }
    const CircuitParams& circuit() const noexcept { return c_; }

private:
    struct Coefficients {
        double g_sw;    // 1/r_sw
        double g_r;     // 1/r (0 when reduced)
        double inv_c1;
        double inv_c2;
        double r;       // control resistance
        bool reduced;
    };

    struct Derivative {
        double du1;
        double du2;
    };

    Coefficients coefficients(double r, SwitchState s, double h);
    Derivative rhs(const Coefficients& k, double u1, double u2) const noexcept;
    void rk4(const Coefficients& k, double h, double& u1, double& u2) const noexcept;
    double locate_event(const Coefficients& k, double h, double level) const;
    /// Quasi-static U1 = r (i0 - U2/r_sw) / (1 + r/r_sw).
    double slave(const Coefficients& k, double u2) const noexcept;

    CircuitParams c_;
    StiffPolicy policy_;
    double t_ = 0.0;
    double u1_ = 0.0;
    double u2_ = 0.0;
    SwitchState state_ = SwitchState::Off;

    // Keyed by (r, state).
    Coefficients cached_{};
    double cached_rate_ = 0.0;
    double cached_r_ = -1.0;
    SwitchState cached_state_ = SwitchState::Off;
};

using ResistanceSchedule = std::function<double(double)>;
using SpikePredicate = std::function<bool(const SpikeTrain&)>;

struct IntegrationOptions {
    double t_end = 0.0;
    double dt = 0.0;
    /// Optional time-varying control resistance; when empty c.r() is used and
    /// dt must satisfy the step guard.
    ResistanceSchedule r_of_t;
    bool record_waveform = true;
    /// Keep every n-th step in the waveform.
    std::size_t record_stride = 1;
    /// Stop once this many turn-on events have been collected (0 = never).
    std::size_t stop_after_spikes = 0;
    /// Optional stop test, evaluated after every step that produced a turn-on.
    SpikePredicate stop_when;
};

struct IntegrationResult {
    Waveform waveform;
    SpikeTrain spikes;
    std::vector<SwitchEvent> events;
};

/// Fixed-step RK4 run from power-on (both capacitors discharged, switch OFF).
/// With a constant resistance, throws StepTooLarge unless
/// dt <= kStepGuard / fastest_rate. With r_of_t, steps the guard cannot
/// resolve use StiffPolicy::Reduce.
IntegrationResult integrate(const CircuitParams& c, const IntegrationOptions& options);

/// Convenience overload matching the common case.
IntegrationResult integrate(const CircuitParams& c, double t_end, double dt,
                            ResistanceSchedule r_of_t = {});

struct StiffOptions {
    double rtol = 1e-10;
    double atol = 1e-12;  // V
    /// The run stops (hit_step_limit set) after this many accepted or
    /// rejected steps.
    std::size_t max_steps = 20'000'000;
    std::size_t stop_after_spikes = 0;
    SpikePredicate stop_when;
};

struct StiffRun {
    SpikeTrain spikes;
    std::vector<SwitchEvent> events;
    std::size_t steps = 0;
    bool hit_step_limit = false;
};

/// Adaptive L-stable SDIRK (order 4 with an embedded order-3 error estimate,
/// gamma = 1/4) on the same Kirchhoff system, from power-on to t_end or until
/// a stop condition. Each stage is a 2x2 linear solve, so the step is limited
/// by accuracy only, not by the C1-r time constant. Switching instants are
/// bisected on re-integrated partial steps. r = 0 shorts C1.
StiffRun integrate_stiff(const CircuitParams& c, double t_end, const StiffOptions& options = {});

/// Largest RK4 step count oracle_frequency accepts in automatic mode before
/// falling back to integrate_stiff.
inline constexpr double kRk4StepBudget = 5e6;

enum class OracleMethod { Rk4, Sdirk };

struct OracleEstimate {
    double f = 0.0;
    OracleMethod method = OracleMethod::Rk4;
};

/// Frequency of the settled oscillation measured on the spike train:
/// (measure_spikes - 1) / (last - first measured spike time).
///
/// Settling lasts at least settle_spikes turn-ons and continues until the
/// period has converged: with successive period changes d_k and ratio
/// q = d_k / d_{k-1}, the remaining drift |d_k| |q| / (1 - |q|) must stay
/// below 1e-6 of the period for 3 consecutive cycles.
///
/// dt > 0 runs RK4 at that step (guard enforced). dt <= 0 runs RK4 at
/// default_step(c) for at most kRk4StepBudget steps and switches to the stiff
/// integrator when that is not enough. Throws InsufficientSpikes when the run
/// ends before the measurement completes.
OracleEstimate oracle_estimate(const CircuitParams& c, std::size_t settle_spikes = 3,
                               std::size_t measure_spikes = 5, double dt = 0.0);

double oracle_frequency(const CircuitParams& c, std::size_t settle_spikes = 3,
                        std::size_t measure_spikes = 5, double dt = 0.0);

}  // namespace relaxosc
