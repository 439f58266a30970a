#pragma once

#include <string_view>

namespace relaxosc {

enum class SwitchState { Off, On };

std::string_view to_string(SwitchState s) noexcept;

/// Hysteretic S-type switch: two ohmic branches with threshold (u_th) and
/// holding (u_h) voltages. Always valid once constructed.
class SwitchParams {
public:
    /// Throws InvalidParameter unless 0 < u_h < u_th, 0 < r_on < r_off and
    /// the NDR window u_th/r_off < u_h/r_on is nonempty.
    static SwitchParams create(double u_th, double u_h, double r_on, double r_off);

    double u_th() const noexcept { return u_th_; }
    double u_h() const noexcept { return u_h_; }
    double r_on() const noexcept { return r_on_; }
    double r_off() const noexcept { return r_off_; }

    double resistance(SwitchState s) const noexcept { return s == SwitchState::On ? r_on_ : r_off_; }

    friend bool operator==(const SwitchParams&, const SwitchParams&) = default;

private:
    SwitchParams(double u_th, double u_h, double r_on, double r_off) noexcept
        : u_th_(u_th), u_h_(u_h), r_on_(r_on), r_off_(r_off) {}

    double u_th_;
    double u_h_;
    double r_on_;
    double r_off_;
};

/// Supply currents that bias the switch into its negative differential
/// resistance region lie strictly between i_th and i_h.
struct NdrWindow {
    double i_th;
    double i_h;

    bool contains(double i0) const noexcept { return i_th < i0 && i0 < i_h; }
};

/// Piecewise-ohmic I-V law: u / r_off when OFF, u / r_on when ON.
double iv_current(double u, SwitchState state, const SwitchParams& p) noexcept;

/// Hysteresis rule. Comparisons are strict; at u == u_th or u == u_h the
/// state is retained.
SwitchState transition(double u, SwitchState state, const SwitchParams& p) noexcept;

NdrWindow ndr_window(const SwitchParams& p) noexcept;

}  // namespace relaxosc
