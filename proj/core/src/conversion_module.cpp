#include "relaxosc/conversion_module.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relaxosc/errors.hpp"

namespace relaxosc {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
    if (!std::isfinite(v) || !(v > 0.0)) {
        throw InvalidParameter(std::string("conversion module: violated ") + what + " > 0");
    }
}

double signed_sum(std::span<const InputSpike> spikes) {
    double s = 0.0;
    for (const InputSpike& sp : spikes) {
        s += static_cast<double>(sp.sign);
    }
    return s;
}

}  // namespace

double ResistanceClamp::operator()(double r) const noexcept {
    return std::clamp(r, r_min, r_max);
}

void ResistanceClamp::validate() const {
    if (!std::isfinite(r_min) || !std::isfinite(r_max) || !(r_min >= 0.0)) {
        throw InvalidParameter("clamp: violated r_min >= 0");
    }
    if (!(r_min < r_max)) {
        throw InvalidParameter("clamp: violated r_min < r_max");
    }
}

void ReceptorMap::validate() const {
    clamp.validate();
    if (const auto* tcr = std::get_if<TcrReceptor>(&kind)) {
        require_positive(tcr->r_ref, "r_ref");
    }
}

double receptor_resistance(const ReceptorMap& m, double stimulus) noexcept {
    return std::visit(overloaded{
                          [&](const LinearReceptor& l) { return m.clamp(l.r_base + l.gain * stimulus); },
                          [&](const TcrReceptor& t) {
                              return m.clamp(t.r_ref * (1.0 + t.tcr * (stimulus - t.t_ref)));
                          },
                      },
                      m.kind);
}

ConversionModule::ConversionModule(const ConversionParams& params) : params_(params) {
    std::visit(overloaded{
                   [&](const CounterParams& p) {
                       require_positive(p.window, "window");
                       p.count_to_r.clamp.validate();
                       level_ = 0.0;
                       output_ = p.count_to_r(0.0);
                   },
                   [&](const IntegratorParams& p) {
                       require_positive(p.c_s, "c_s");
                       require_positive(p.r_s, "r_s");
                       require_positive(p.q_spike, "q_spike");
                       p.v_to_r.clamp.validate();
                       level_ = 0.0;
                       output_ = p.v_to_r(0.0);
                   },
                   [&](const ThermalParams& p) {
                       require_positive(p.heat_per_spike, "heat_per_spike");
                       require_positive(p.thermal_capacity, "thermal_capacity");
                       require_positive(p.cooling_rate, "cooling_rate");
                       require_positive(p.ambient, "ambient");
                       require_positive(p.temp_to_r.r_ref, "r_ref");
                       p.temp_to_r.clamp.validate();
                       level_ = p.ambient;
                       output_ = p.temp_to_r(p.ambient);
                   },
               },
               params_);
}

ResistanceClamp ConversionModule::clamp() const noexcept {
    return std::visit(overloaded{
                          [](const CounterParams& p) { return p.count_to_r.clamp; },
                          [](const IntegratorParams& p) { return p.v_to_r.clamp; },
                          [](const ThermalParams& p) { return p.temp_to_r.clamp; },
                      },
                      params_);
}

double ConversionModule::step(std::span<const InputSpike> spikes, double dt) {
    std::visit(overloaded{
                   [&](const CounterParams& p) {
                       level_ += signed_sum(spikes);
                       elapsed_ += dt;
                       const auto index = static_cast<long long>(std::floor(elapsed_ / p.window));
                       if (index > window_index_) {
                           output_ = p.count_to_r(level_);
                           level_ = 0.0;
                           window_index_ = index;
                       }
                   },
                   [&](const IntegratorParams& p) {
                       level_ = level_ * std::exp(-dt / (p.r_s * p.c_s)) + signed_sum(spikes) * p.q_spike / p.c_s;
                       output_ = p.v_to_r(level_);
                   },
                   [&](const ThermalParams& p) {
                       level_ = p.ambient + (level_ - p.ambient) * std::exp(-p.cooling_rate * dt) +
                                signed_sum(spikes) * p.heat_per_spike / p.thermal_capacity;
                       output_ = p.temp_to_r(level_);
                   },
               },
               params_);
    return output_;
}

}  // namespace relaxosc
