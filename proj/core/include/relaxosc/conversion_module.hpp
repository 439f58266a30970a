#pragma once

#include <span>
#include <variant>

namespace relaxosc {

/// Closed resistance interval every map output is clamped to.
struct ResistanceClamp {
    double r_min = 0.0;
    double r_max = 0.0;

    double operator()(double r) const noexcept;
    /// Throws InvalidParameter unless 0 <= r_min < r_max.
    void validate() const;
};

/// r = clamp(r0 + slope * x)
struct AffineMap {
    double r0 = 0.0;
    double slope = 0.0;
    ResistanceClamp clamp;

    double operator()(double x) const noexcept { return clamp(r0 + slope * x); }
};

/// r = clamp(r_ref (1 + tcr (T - t_ref)))
struct TcrMap {
    double r_ref = 0.0;
    double tcr = 0.0;
    double t_ref = 0.0;
    ResistanceClamp clamp;

    double operator()(double temperature) const noexcept {
        return clamp(r_ref * (1.0 + tcr * (temperature - t_ref)));
    }
};

struct LinearReceptor {
    double r_base = 0.0;
    double gain = 0.0;  // ohm per stimulus unit
};

struct TcrReceptor {
    double r_ref = 0.0;
    double tcr = 0.0;    // 1/K
    double t_ref = 0.0;  // K
};

/// Stimulus -> resistance transducer of a receptor neuron.
struct ReceptorMap {
    std::variant<LinearReceptor, TcrReceptor> kind;
    ResistanceClamp clamp;

    void validate() const;
};

double receptor_resistance(const ReceptorMap& m, double stimulus) noexcept;

/// Pulse counter latched to a register once per window; the register drives
/// the resistance. Inhibitory inputs count down.
struct CounterParams {
    double window = 0.0;  // s
    AffineMap count_to_r;
};

/// Storage capacitor charged by each input spike and discharged through a
/// shunt resistor; its voltage sets the resistance.
struct IntegratorParams {
    double c_s = 0.0;      // F
    double r_s = 0.0;      // ohm
    double q_spike = 0.0;  // C per input spike
    AffineMap v_to_r;
};

/// Heater warmed by each input spike, Newton cooling toward ambient; a
/// thermistor converts its temperature to resistance.
struct ThermalParams {
    double heat_per_spike = 0.0;    // J
    double thermal_capacity = 0.0;  // J/K
    double cooling_rate = 0.0;      // 1/s
    double ambient = 300.0;         // K
    TcrMap temp_to_r;
};

using ConversionParams = std::variant<CounterParams, IntegratorParams, ThermalParams>;

/// One incoming spike: +1 excitatory, -1 inhibitory.
struct InputSpike {
    double t;
    int sign;
};

/// Frequency-to-resistance converter feeding one oscillator.
class ConversionModule {
public:
    /// Throws InvalidParameter on non-positive physical parameters or an
    /// invalid clamp.
    explicit ConversionModule(const ConversionParams& params);

    /// Consumes the spikes that arrived in [t, t + dt) and returns the
    /// control resistance to apply over the next step.
    ///   counter:    signed count; latched to r at each window boundary
    ///   integrator: v <- v e^{-dt/(r_s c_s)} + sum(sign q_spike / c_s)
    ///   thermal:    T <- T_amb + (T - T_amb) e^{-k dt} + sum(sign heat / C_th)
    double step(std::span<const InputSpike> spikes, double dt);

    /// Resistance currently applied (before any step: the zero-input value).
    double output() const noexcept { return output_; }
    /// Integrator voltage, thermal temperature or running count.
    double level() const noexcept { return level_; }
    const ConversionParams& params() const noexcept { return params_; }

    /// Clamp bounds of whichever map drives the output.
    ResistanceClamp clamp() const noexcept;

private:
    ConversionParams params_;
    double level_ = 0.0;
    double output_ = 0.0;
    double elapsed_ = 0.0;
    long long window_index_ = 0;
};

}  // namespace relaxosc
