#include "relaxosc/switch_model.hpp"

#include <cmath>
#include <string>

#include "relaxosc/errors.hpp"

namespace relaxosc {

std::string_view to_string(SwitchState s) noexcept {
    return s == SwitchState::On ? "ON" : "OFF";
}

SwitchParams SwitchParams::create(double u_th, double u_h, double r_on, double r_off) {
    for (double v : {u_th, u_h, r_on, r_off}) {
        if (!std::isfinite(v)) {
            throw InvalidParameter("switch parameters must be finite");
        }
    }
    if (!(u_h > 0.0)) {
        throw InvalidParameter("switch: violated 0 < u_h (u_h = " + std::to_string(u_h) + ")");
    }
    if (!(u_h < u_th)) {
        throw InvalidParameter("switch: violated u_h < u_th (u_h = " + std::to_string(u_h) +
                               ", u_th = " + std::to_string(u_th) + ")");
    }
    if (!(r_on > 0.0)) {
        throw InvalidParameter("switch: violated 0 < r_on");
    }
    if (!(r_on < r_off)) {
        throw InvalidParameter("switch: violated r_on < r_off (r_on = " + std::to_string(r_on) +
                               ", r_off = " + std::to_string(r_off) + ")");
    }
    if (!(u_th / r_off < u_h / r_on)) {
        throw InvalidParameter("switch: empty NDR window, violated u_th/r_off < u_h/r_on");
    }
    return SwitchParams(u_th, u_h, r_on, r_off);
}

double iv_current(double u, SwitchState state, const SwitchParams& p) noexcept {
    return u / p.resistance(state);
}

SwitchState transition(double u, SwitchState state, const SwitchParams& p) noexcept {
    if (state == SwitchState::Off && u > p.u_th()) {
        return SwitchState::On;
    }
    if (state == SwitchState::On && u < p.u_h()) {
        return SwitchState::Off;
    }
    return state;
}

NdrWindow ndr_window(const SwitchParams& p) noexcept {
    return {p.u_th() / p.r_off(), p.u_h() / p.r_on()};
}

}  // namespace relaxosc
