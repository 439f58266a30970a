#include "relaxosc/numeric_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include "relaxosc/analytic_engine.hpp"
#include "relaxosc/errors.hpp"

namespace relaxosc {
namespace {

// Event localization resolution, as a fraction of the step.
constexpr double kEventResolution = 1e-3;

double fastest_rate_in_state(const CircuitParams& c, double r, SwitchState s) {
    const double g_sw = 1.0 / c.switch_params().resistance(s);
    const double g_r = 1.0 / r;
    // Jacobian [[-(g_sw + g_r)/C1, -g_sw/C1], [-g_sw/C2, -g_sw/C2]]
    const double trace = (g_sw + g_r) / c.c1() + g_sw / c.c2();
    const double det = g_sw * g_r / (c.c1() * c.c2());
    const double disc = std::max(trace * trace - 4.0 * det, 0.0);
    return 0.5 * (trace + std::sqrt(disc));
}

double cubic_hermite(double y0, double dy0, double y1, double dy1, double h, double theta) {
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + theta) * h * dy0 +
           (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * h * dy1;
}

}  // namespace

double fastest_rate(const CircuitParams& c, double r) {
    if (r == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::max(fastest_rate_in_state(c, r, SwitchState::On), fastest_rate_in_state(c, r, SwitchState::Off));
}

double default_step(const CircuitParams& c) {
    return kDefaultStepFraction / fastest_rate(c, c.r());
}

OscillatorStepper::OscillatorStepper(const CircuitParams& c, StiffPolicy policy) : c_(c), policy_(policy) {}

OscillatorStepper::Coefficients OscillatorStepper::coefficients(double r, SwitchState s, double h) {
    if (r != cached_r_ || s != cached_state_) {
        cached_rate_ = fastest_rate(c_, r);
        cached_.g_sw = 1.0 / c_.switch_params().resistance(s);
        cached_.inv_c1 = 1.0 / c_.c1();
        cached_.inv_c2 = 1.0 / c_.c2();
        cached_.r = r;
        cached_r_ = r;
        cached_state_ = s;
    }
    Coefficients k = cached_;
    // Slack absorbs the rounding in t_next - t on a k*dt grid.
    const bool resolvable = h * cached_rate_ <= kStepGuard * (1.0 + 1e-9);
    if (!resolvable && policy_ == StiffPolicy::Reject) {
        std::ostringstream os;
        os << "step " << h << " s exceeds the guard " << kStepGuard << "/" << cached_rate_
           << " 1/s for r = " << r << " ohm";
        throw StepTooLarge(os.str());
    }
    k.reduced = !resolvable;
    k.g_r = resolvable ? 1.0 / r : 0.0;
    return k;
}

OscillatorStepper::Derivative OscillatorStepper::rhs(const Coefficients& k, double u1, double u2) const noexcept {
    const double i_c2 = c_.i0() - (u1 + u2) * k.g_sw;
    if (k.reduced) {
        return {0.0, i_c2 * k.inv_c2};
    }
    return {(i_c2 - u1 * k.g_r) * k.inv_c1, i_c2 * k.inv_c2};
}

void OscillatorStepper::rk4(const Coefficients& k, double h, double& u1, double& u2) const noexcept {
    if (k.reduced) {
        auto f = [&](double v2) { return (c_.i0() - (slave(k, v2) + v2) * k.g_sw) * k.inv_c2; };
        const double k1 = f(u2);
        const double k2 = f(u2 + 0.5 * h * k1);
        const double k3 = f(u2 + 0.5 * h * k2);
        const double k4 = f(u2 + h * k3);
        u2 += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        u1 = slave(k, u2);
        return;
    }
    const Derivative k1 = rhs(k, u1, u2);
    const Derivative k2 = rhs(k, u1 + 0.5 * h * k1.du1, u2 + 0.5 * h * k1.du2);
    const Derivative k3 = rhs(k, u1 + 0.5 * h * k2.du1, u2 + 0.5 * h * k2.du2);
    const Derivative k4 = rhs(k, u1 + h * k3.du1, u2 + h * k3.du2);
    u1 += h / 6.0 * (k1.du1 + 2.0 * k2.du1 + 2.0 * k3.du1 + k4.du1);
    u2 += h / 6.0 * (k1.du2 + 2.0 * k2.du2 + 2.0 * k3.du2 + k4.du2);
}

double OscillatorStepper::locate_event(const Coefficients& k, double h, double level) const {
    double u1_end = u1_;
    double u2_end = u2_;
    rk4(k, h, u1_end, u2_end);
    const Derivative d0 = rhs(k, u1_, u2_);
    const Derivative d1 = rhs(k, u1_end, u2_end);
    const double y0 = usw() - level;
    const double y1 = u1_end + u2_end - level;
    const double dy0 = d0.du1 + d0.du2;
    const double dy1 = d1.du1 + d1.du2;

    double lo = 0.0;
    double hi = 1.0;
    const bool start_positive = y0 > 0.0;
    while (hi - lo > kEventResolution) {
        const double mid = 0.5 * (lo + hi);
        const double y = cubic_hermite(y0, dy0, y1, dy1, h, mid);
        if ((y > 0.0) == start_positive) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double OscillatorStepper::slave(const Coefficients& k, double u2) const noexcept {
    return k.r * (c_.i0() - u2 * k.g_sw) / (1.0 + k.r * k.g_sw);
}

void OscillatorStepper::advance_to(double t_next, double r, std::vector<SwitchEvent>& events) {
    const SwitchParams& sw = c_.switch_params();
    bool snap_flipped = false;
    while (t_ < t_next) {
        const double h = t_next - t_;
        const Coefficients k = coefficients(r, state_, h);
        if (k.reduced) {
            // Put U1 on the slow manifold first; the jump in usw can itself
            // cross a threshold (at most once per call, so it cannot ping-pong).
            u1_ = slave(k, u2_);
            const SwitchState snapped = transition(usw(), state_, sw);
            if (snapped != state_ && !snap_flipped) {
                snap_flipped = true;
                state_ = snapped;
                events.push_back({t_, snapped});
                continue;
            }
        }

        double u1 = u1_;
        double u2 = u2_;
        rk4(k, h, u1, u2);
        const SwitchState next = transition(u1 + u2, state_, sw);
        if (next == state_) {
            u1_ = u1;
            u2_ = u2;
            t_ = t_next;
            break;
        }

        const double level = state_ == SwitchState::Off ? sw.u_th() : sw.u_h();
        const double theta = locate_event(k, h, level);
        const double h_event = theta * h;
        rk4(k, h_event, u1_, u2_);
        t_ += h_event;
        state_ = next;
        events.push_back({t_, next});
    }
    if (!std::isfinite(u1_) || !std::isfinite(u2_)) {
        throw NonFiniteState("oscillator state became non-finite at t = " + std::to_string(t_) + " s");
    }
}

IntegrationResult integrate(const CircuitParams& c, const IntegrationOptions& options) {
    if (!(options.t_end > 0.0)) {
        throw InvalidParameter("integrate: violated t_end > 0");
    }
    if (!(options.dt > 0.0)) {
        throw InvalidParameter("integrate: violated dt > 0");
    }
    const bool varying = static_cast<bool>(options.r_of_t);
    if (!varying) {
        const double limit = kStepGuard / fastest_rate(c, c.r());
        if (options.dt > limit) {
            std::ostringstream os;
            os << "integrate: dt = " << options.dt << " s exceeds the step guard " << limit << " s";
            throw StepTooLarge(os.str());
        }
    }

    OscillatorStepper stepper(c, varying ? StiffPolicy::Reduce : StiffPolicy::Reject);
    const SwitchParams& sw = c.switch_params();
    const std::size_t stride = std::max<std::size_t>(options.record_stride, 1);
    const auto n_steps = static_cast<std::size_t>(std::ceil(options.t_end / options.dt));

    IntegrationResult out;
    auto record = [&](double t) {
        const double usw = stepper.usw();
        out.waveform.samples.push_back(
            {t, stepper.u1(), stepper.u2(), usw, iv_current(usw, stepper.state(), sw), stepper.state()});
    };
    if (options.record_waveform) {
        out.waveform.samples.reserve(n_steps / stride + 2);
        record(0.0);
    }

    std::vector<SwitchEvent> step_events;
    for (std::size_t k = 1; k <= n_steps; ++k) {
        const double t_prev = static_cast<double>(k - 1) * options.dt;
        const double t_next = std::min(static_cast<double>(k) * options.dt, options.t_end);
        double r = c.r();
        if (varying) {
            r = options.r_of_t(t_prev);
            if (!(r >= 0.0) || !std::isfinite(r)) {
                throw InvalidParameter("integrate: r_of_t returned a negative or non-finite resistance");
            }
        }
        step_events.clear();
        stepper.advance_to(t_next, r, step_events);
        for (const SwitchEvent& e : step_events) {
            out.events.push_back(e);
            if (e.to == SwitchState::On) {
                out.spikes.times.push_back(e.t);
            }
        }
        if (options.record_waveform && (k % stride == 0 || k == n_steps)) {
            record(t_next);
        }
        bool new_spike = false;
        for (const SwitchEvent& e : step_events) {
            new_spike = new_spike || e.to == SwitchState::On;
        }
        if (options.stop_after_spikes != 0 && out.spikes.size() >= options.stop_after_spikes) {
            break;
        }
        if (new_spike && options.stop_when && options.stop_when(out.spikes)) {
            break;
        }
    }
    return out;
}

IntegrationResult integrate(const CircuitParams& c, double t_end, double dt, ResistanceSchedule r_of_t) {
    IntegrationOptions options;
    options.t_end = t_end;
    options.dt = dt;
    options.r_of_t = std::move(r_of_t);
    return integrate(c, options);
}

namespace {

// Hairer-Wanner SDIRK4 tableau; b equals the last row (stiffly accurate).
constexpr double kGamma = 0.25;
constexpr double kA[5][5] = {
    {0.25, 0.0, 0.0, 0.0, 0.0},
    {0.5, 0.25, 0.0, 0.0, 0.0},
    {17.0 / 50.0, -1.0 / 25.0, 0.25, 0.0, 0.0},
    {371.0 / 1360.0, -137.0 / 2720.0, 15.0 / 544.0, 0.25, 0.0},
    {25.0 / 24.0, -49.0 / 48.0, 125.0 / 16.0, -85.0 / 12.0, 0.25},
};
constexpr double kBHat[5] = {59.0 / 48.0, -17.0 / 96.0, 225.0 / 32.0, -85.0 / 12.0, 0.0};

// y' = A y + g within one switch state.
struct LinearSystem {
    double a11, a12, a21, a22;
    double g1, g2;
    bool shorted;  // r == 0: U1 pinned to 0
    double slow_rate;

    LinearSystem(const CircuitParams& c, SwitchState s) {
        const double g_sw = 1.0 / c.switch_params().resistance(s);
        shorted = c.r() == 0.0;
        a21 = -g_sw / c.c2();
        a22 = -g_sw / c.c2();
        g2 = c.i0() / c.c2();
        if (shorted) {
            a11 = a12 = g1 = 0.0;
            slow_rate = g_sw / c.c2();
        } else {
            const double g_r = 1.0 / c.r();
            a11 = -(g_sw + g_r) / c.c1();
            a12 = -g_sw / c.c1();
            g1 = c.i0() / c.c1();
            const double trace = -(a11 + a22);
            const double det = a11 * a22 - a12 * a21;
            const double fast = 0.5 * (trace + std::sqrt(std::max(trace * trace - 4.0 * det, 0.0)));
            slow_rate = det / fast;
        }
    }

    void eval(double u1, double u2, double& d1, double& d2) const noexcept {
        d1 = a11 * u1 + a12 * u2 + g1;
        d2 = a21 * u1 + a22 * u2 + g2;
    }
};

struct SdirkStep {
    double u1, u2;
    double e1, e2;  // embedded error estimate
};

SdirkStep sdirk_step(const LinearSystem& s, double u1, double u2, double h) {
    // (I - h gamma A)^{-1}
    const double hg = h * kGamma;
    const double m11 = 1.0 - hg * s.a11;
    const double m12 = -hg * s.a12;
    const double m21 = -hg * s.a21;
    const double m22 = 1.0 - hg * s.a22;
    const double inv_det = 1.0 / (m11 * m22 - m12 * m21);

    double k1[5];
    double k2[5];
    double y1 = u1;
    double y2 = u2;
    for (int i = 0; i < 5; ++i) {
        double r1 = u1 + hg * s.g1;
        double r2 = u2 + hg * s.g2;
        for (int j = 0; j < i; ++j) {
            r1 += h * kA[i][j] * k1[j];
            r2 += h * kA[i][j] * k2[j];
        }
        y1 = (m22 * r1 - m12 * r2) * inv_det;
        y2 = (m11 * r2 - m21 * r1) * inv_det;
        s.eval(y1, y2, k1[i], k2[i]);
    }
    double e1 = 0.0;
    double e2 = 0.0;
    for (int i = 0; i < 5; ++i) {
        e1 += h * (kA[4][i] - kBHat[i]) * k1[i];
        e2 += h * (kA[4][i] - kBHat[i]) * k2[i];
    }
    if (s.shorted) {
        y1 = 0.0;
        e1 = 0.0;
    }
    return {y1, y2, e1, e2};
}

}  // namespace

StiffRun integrate_stiff(const CircuitParams& c, double t_end, const StiffOptions& options) {
    if (!(t_end > 0.0)) {
        throw InvalidParameter("integrate_stiff: violated t_end > 0");
    }
    const SwitchParams& sw = c.switch_params();
    const LinearSystem systems[2] = {LinearSystem(c, SwitchState::Off), LinearSystem(c, SwitchState::On)};
    const auto system_for = [&](SwitchState s) -> const LinearSystem& { return systems[s == SwitchState::On ? 1 : 0]; };

    StiffRun out;
    SwitchState state = SwitchState::Off;
    double t = 0.0;
    double u1 = 0.0;
    double u2 = 0.0;
    double h = 1e-3 / system_for(state).slow_rate;

    while (t < t_end) {
        if (++out.steps > options.max_steps) {
            out.hit_step_limit = true;
            break;
        }
        const LinearSystem& sys = system_for(state);
        // Resolve the slow mode so a step cannot jump over a pair of crossings.
        h = std::min({h, 0.05 / sys.slow_rate, t_end - t});
        const SdirkStep step = sdirk_step(sys, u1, u2, h);
        const double s1 = options.atol + options.rtol * std::max(std::abs(u1), std::abs(step.u1));
        const double s2 = options.atol + options.rtol * std::max(std::abs(u2), std::abs(step.u2));
        const double err = std::sqrt(0.5 * ((step.e1 / s1) * (step.e1 / s1) + (step.e2 / s2) * (step.e2 / s2)));
        if (!std::isfinite(err)) {
            throw NonFiniteState("integrate_stiff: non-finite error estimate at t = " + std::to_string(t) + " s");
        }
        const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.25) : 5.0;
        if (err > 1.0) {
            h *= std::max(0.2, grow);
            continue;
        }

        const SwitchState next = transition(step.u1 + step.u2, state, sw);
        if (next == state) {
            t += h;
            u1 = step.u1;
            u2 = step.u2;
        } else {
            // First fraction of the step at which the switch flips.
            double lo = 0.0;
            double hi = 1.0;
            while ((hi - lo) > 1e-13) {
                const double mid = 0.5 * (lo + hi);
                const SdirkStep part = sdirk_step(sys, u1, u2, mid * h);
                if (transition(part.u1 + part.u2, state, sw) != state) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            const SdirkStep part = sdirk_step(sys, u1, u2, hi * h);
            t += hi * h;
            u1 = part.u1;
            u2 = part.u2;
            state = next;
            out.events.push_back({t, next});
            if (next == SwitchState::On) {
                out.spikes.times.push_back(t);
                if (options.stop_after_spikes != 0 && out.spikes.size() >= options.stop_after_spikes) {
                    break;
                }
                if (options.stop_when && options.stop_when(out.spikes)) {
                    break;
                }
            }
        }
        h *= std::min(5.0, grow);
    }
    return out;
}

namespace {

// Decides when the spike train has settled and when the measurement window
// after it is complete.
class SettleDetector {
public:
    SettleDetector(std::size_t min_settle, std::size_t measure) : min_settle_(min_settle), measure_(measure) {}

    bool operator()(const SpikeTrain& spikes) {
        const std::size_t n = spikes.size();
        if (start_) {
            return n >= *start_ + measure_;
        }
        if (n < std::max<std::size_t>(min_settle_, 3) + 1) {
            return false;
        }
        const auto& t = spikes.times;
        const double p2 = t[n - 1] - t[n - 2];
        const double p1 = t[n - 2] - t[n - 3];
        const double d1 = p2 - p1;
        bool ok = std::abs(d1) <= kPeriodNoise * p2;
        if (!ok && last_change_ != 0.0) {
            const double q = std::abs(d1 / last_change_);
            ok = q < 1.0 && std::abs(d1) * q / (1.0 - q) <= kDrift * p2;
        }
        last_change_ = d1;
        quiet_ = ok ? quiet_ + 1 : 0;
        if (quiet_ >= 3) {
            start_ = n - 1;
        }
        return false;
    }

    /// Index of the first measured spike, once settled.
    std::optional<std::size_t> start() const noexcept { return start_; }

private:
    static constexpr double kPeriodNoise = 1e-9;
    static constexpr double kDrift = 1e-6;

    std::size_t min_settle_;
    std::size_t measure_;
    double last_change_ = 0.0;
    std::size_t quiet_ = 0;
    std::optional<std::size_t> start_;
};

double measured_frequency(const SpikeTrain& spikes, std::size_t first, std::size_t measure) {
    const double t_first = spikes.times[first];
    const double t_last = spikes.times[first + measure - 1];
    return static_cast<double>(measure - 1) / (t_last - t_first);
}

}  // namespace

OracleEstimate oracle_estimate(const CircuitParams& c, std::size_t settle_spikes, std::size_t measure_spikes,
                               double dt) {
    if (measure_spikes < 2) {
        throw InvalidParameter("oracle_frequency: violated measure_spikes >= 2");
    }

    // The analytic period only bounds the run length; it never enters the
    // measured frequency.
    double cap = 10.0;
    try {
        const CycleSolution expected = limit_cycle(c);
        cap = expected.t0 + 1e5 * expected.period();
    } catch (const Error&) {
        // fall back to the fixed cap
    }

    const bool forced_rk4 = dt > 0.0;
    if (forced_rk4 || c.r() > 0.0) {
        SettleDetector detector(settle_spikes, measure_spikes);
        IntegrationOptions options;
        options.dt = forced_rk4 ? dt : default_step(c);
        options.t_end = forced_rk4 ? cap : std::min(cap, kRk4StepBudget * options.dt);
        options.record_waveform = false;
        options.stop_when = std::ref(detector);
        const IntegrationResult run = integrate(c, options);
        if (detector.start() && run.spikes.size() >= *detector.start() + measure_spikes) {
            return {measured_frequency(run.spikes, *detector.start(), measure_spikes), OracleMethod::Rk4};
        }
        if (forced_rk4) {
            std::ostringstream os;
            os << "oracle_frequency: oscillation did not settle within " << cap << " s (" << run.spikes.size()
               << " spikes)";
            throw InsufficientSpikes(os.str());
        }
    }

    SettleDetector detector(settle_spikes, measure_spikes);
    StiffOptions options;
    options.stop_when = std::ref(detector);
    const StiffRun run = integrate_stiff(c, cap, options);
    if (!detector.start() || run.spikes.size() < *detector.start() + measure_spikes) {
        std::ostringstream os;
        os << "oracle_frequency: oscillation did not settle within " << cap << " s or " << options.max_steps
           << " steps (" << run.spikes.size() << " spikes)";
        throw InsufficientSpikes(os.str());
    }
    return {measured_frequency(run.spikes, *detector.start(), measure_spikes), OracleMethod::Sdirk};
}

double oracle_frequency(const CircuitParams& c, std::size_t settle_spikes, std::size_t measure_spikes, double dt) {
    return oracle_estimate(c, settle_spikes, measure_spikes, dt).f;
}

}  // namespace relaxosc
