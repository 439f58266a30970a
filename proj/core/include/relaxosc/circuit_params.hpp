#pragma once

#include "relaxosc/switch_model.hpp"

namespace relaxosc {

/// Two-capacitor oscillator: a current source i0 drives the switch, which is
/// shunted by C1 and C2 in series; C1 is additionally shunted by the control
/// resistance r.
class CircuitParams {
public:
    /// Throws InvalidParameter unless c1 > 0, c2 > 0, r >= 0 (finite) and
    /// i0 lies strictly inside the switch's NDR window.
    static CircuitParams create(const SwitchParams& sw, double i0, double c1, double c2, double r);

    const SwitchParams& switch_params() const noexcept { return sw_; }
    double i0() const noexcept { return i0_; }
    double c1() const noexcept { return c1_; }
    double c2() const noexcept { return c2_; }
    double r() const noexcept { return r_; }

    /// Copy with a different control resistance (validated).
    CircuitParams with_r(double r) const;
    CircuitParams with_capacitances(double c1, double c2) const;

    /// Series capacitance c1*c2/(c1+c2).
    double series_capacitance() const noexcept { return c1_ * c2_ / (c1_ + c2_); }

    friend bool operator==(const CircuitParams&, const CircuitParams&) = default;

private:
    CircuitParams(const SwitchParams& sw, double i0, double c1, double c2, double r) noexcept
        : sw_(sw), i0_(i0), c1_(c1), c2_(c2), r_(r) {}

    SwitchParams sw_;
    double i0_;
    double c1_;
    double c2_;
    double r_;
};

}  // namespace relaxosc
