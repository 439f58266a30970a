#include "relaxosc/analytic_engine.hpp"

#include <cmath>
#include <sstream>

namespace relaxosc {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

int sign_of(double v) noexcept { return (v > 0.0) - (v < 0.0); }

// Bisection on [lo, hi] where g(lo) and g(hi) have opposite signs. Runs until
// the midpoint is no longer representable between the endpoints.
template <class G>
double bisect(G&& g, double lo, double hi) {
    int s_lo = sign_of(g(lo));
    for (int i = 0; i < 2200; ++i) {
        const double mid = lo + 0.5 * (hi - lo);
        if (!(mid > lo && mid < hi)) {
            break;
        }
        const double gm = g(mid);
        if (gm == 0.0) {
            return mid;
        }
        if (sign_of(gm) == s_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::abs(g(lo)) < std::abs(g(hi)) ? lo : hi;
}

std::string no_crossing_message(const PhasePiece& piece, double level) {
    std::ostringstream os;
    os.precision(6);
    os << "switch voltage in the " << to_string(piece.state) << " segment never reaches " << level
       << " V (asymptote " << piece.v0 << " V)";
    return os.str();
}

double reduced_crossing(const PhasePiece& piece, double level, double t_max) {
    // usw(t) = v0 + m1 e^{-a2 t}
    const double ratio = piece.m1 / (level - piece.v0);
    if (!(ratio > 1.0) || !std::isfinite(ratio)) {
        throw NoCrossing(no_crossing_message(piece, level));
    }
    const double t = std::log(ratio) / piece.a2;
    if (t > t_max) {
        throw NoCrossing(no_crossing_message(piece, level) + " before t_max");
    }
    return t;
}

}  // namespace

PhasePiece phase_params(const CircuitParams& c, SwitchState state) {
    if (c.r() == 0.0) {
        throw DegenerateResistance("two-capacitor coefficients are undefined at r = 0 (b diverges)");
    }
    PhasePiece p;
    p.state = state;
    p.r_sw = c.switch_params().resistance(state);
    p.a1 = 1.0 / (p.r_sw * c.c1());
    p.a2 = 1.0 / (p.r_sw * c.c2());
    p.b = (c.r() + p.r_sw) / c.r();
    p.v0 = p.r_sw * c.i0();

    const double split = p.a1 * p.b - p.a2;
    p.d = 4.0 * p.a1 * p.a2 + split * split;
    const double root = std::sqrt(p.d);
    p.alpha2 = 0.5 * (p.a1 * p.b + p.a2 + root);
    // alpha1 * alpha2 = a1 a2 (b - 1); avoids cancellation when r >> r_sw.
    p.alpha1 = p.a1 * p.a2 * (p.r_sw / c.r()) / p.alpha2;
    // beta1 * beta2 = -a1 a2; take the root without cancellation first.
    if (split >= 0.0) {
        p.beta1 = 0.5 * (split + root);
        p.beta2 = -p.a1 * p.a2 / p.beta1;
    } else {
        p.beta2 = 0.5 * (split - root);
        p.beta1 = -p.a1 * p.a2 / p.beta2;
    }
    return p;
}

PhasePiece reduced_phase_params(const CircuitParams& c, SwitchState state) {
    PhasePiece p;
    p.state = state;
    p.shorted = true;
    p.r_sw = c.switch_params().resistance(state);
    p.a1 = 1.0 / (p.r_sw * c.c1());
    p.a2 = 1.0 / (p.r_sw * c.c2());
    p.b = std::numeric_limits<double>::infinity();
    p.v0 = p.r_sw * c.i0();
    p.alpha1 = p.a2;
    p.alpha2 = p.a2;
    return p;
}

PhasePiece segment_params(const CircuitParams& c, SwitchState state) {
    return c.r() == 0.0 ? reduced_phase_params(c, state) : phase_params(c, state);
}

SolutionCoefficients fit_initial(const PhasePiece& piece, double u10, double u20) noexcept {
    if (piece.shorted) {
        return {u20 - piece.v0, 0.0};
    }
    const double m1 = (piece.a1 * (u20 - piece.v0) + u10 * piece.beta2) /
                      (piece.a1 * (piece.beta1 - piece.beta2));
    const double m2 = -(m1 + u10 / piece.a1);
    return {m1, m2};
}

PhasePiece start_piece(PhasePiece piece, double u10, double u20, double t_start) noexcept {
    const SolutionCoefficients m = fit_initial(piece, u10, u20);
    piece.m1 = m.m1;
    piece.m2 = m.m2;
    piece.u10 = piece.shorted ? 0.0 : u10;
    piece.u20 = u20;
    piece.t_start = t_start;
    return piece;
}

PhaseValue eval_phase(const PhasePiece& piece, double t) noexcept {
    if (t == 0.0) {
        return {piece.u10, piece.u20, piece.u10 + piece.u20};
    }
    if (piece.shorted) {
        const double u2 = piece.v0 + piece.m1 * std::exp(-piece.a2 * t);
        return {0.0, u2, u2};
    }
    const double e1 = std::exp(-piece.alpha1 * t);
    const double e2 = std::exp(-piece.alpha2 * t);
    const double u1 = -piece.a1 * (piece.m1 * e1 + piece.m2 * e2);
    const double u2 = piece.v0 + piece.m1 * piece.beta1 * e1 + piece.m2 * piece.beta2 * e2;
    return {u1, u2, u1 + u2};
}

double crossing_time(const PhasePiece& piece, double level, double t_max) {
    auto g = [&](double t) { return eval_phase(piece, t).usw - level; };
    const double g0 = g(0.0);
    if (g0 == 0.0) {
        throw DomainError("crossing_time: switch voltage already equals the level at t = 0");
    }
    if (piece.shorted) {
        return reduced_crossing(piece, level, t_max);
    }

    // usw - level = A e^{-alpha1 t} + B e^{-alpha2 t} + C
    const double big_a = piece.m1 * (piece.beta1 - piece.a1);
    const double big_b = piece.m2 * (piece.beta2 - piece.a1);
    const double big_c = piece.v0 - level;

    double start = 0.0;
    if (big_a != 0.0) {
        const double q = -piece.alpha2 * big_b / (piece.alpha1 * big_a);
        if (q > 1.0 && std::isfinite(q)) {
            const double t_star = std::log(q) / (piece.alpha2 - piece.alpha1);
            const double end = std::min(t_star, t_max);
            const double g_end = g(end);
            if (g_end == 0.0) {
                return end;
            }
            if (sign_of(g_end) != sign_of(g0)) {
                return bisect(g, 0.0, end);
            }
            if (t_star >= t_max) {
                throw NoCrossing(no_crossing_message(piece, level) + " before t_max");
            }
            start = t_star;
        }
    }

    // Monotone from `start` toward C.
    const int s_start = sign_of(g(start));
    if (sign_of(big_c) == s_start || big_c == 0.0) {
        throw NoCrossing(no_crossing_message(piece, level));
    }
    double lo = start;
    double step = 1.0 / piece.alpha2;
    for (;;) {
        double hi = lo + step;
        if (hi >= t_max) {
            hi = t_max;
        }
        const double g_hi = g(hi);
        if (g_hi == 0.0) {
            return hi;
        }
        if (sign_of(g_hi) != s_start) {
            return bisect(g, lo, hi);
        }
        if (hi == t_max || !std::isfinite(hi)) {
            throw NoCrossing(no_crossing_message(piece, level) + " before t_max");
        }
        lo = hi;
        step *= 2.0;
    }
}

StartupTransient startup_transient(const CircuitParams& c) {
    const PhasePiece piece = start_piece(segment_params(c, SwitchState::Off), 0.0, 0.0);
    const double t0 = crossing_time(piece, c.switch_params().u_th());
    const PhaseValue v = eval_phase(piece, t0);
    return {t0, v.u1, v.u2, piece};
}

CycleStep cycle_map(const CircuitParams& c, double u10, double u20) {
    const SwitchParams& sw = c.switch_params();
    CycleStep step;
    step.on_piece = start_piece(segment_params(c, SwitchState::On), u10, u20);
    step.t1 = crossing_time(step.on_piece, sw.u_h());
    const PhaseValue off_start = eval_phase(step.on_piece, step.t1);
    step.off_piece = start_piece(segment_params(c, SwitchState::Off), off_start.u1, off_start.u2, step.t1);
    step.t2 = crossing_time(step.off_piece, sw.u_th());
    const PhaseValue next = eval_phase(step.off_piece, step.t2);
    step.u10_next = next.u1;
    step.u20_next = next.u2;
    return step;
}

CycleSolution limit_cycle(const CircuitParams& c, const LimitCycleOptions& options) {
    const double u_th = c.switch_params().u_th();
    const double tol_abs = options.tol * u_th;
    const double noise_floor = 64.0 * kEps * u_th;

    const StartupTransient startup = startup_transient(c);

    CycleSolution sol;
    sol.t0 = startup.t0;
    auto record = [&](double x, const CycleStep& s) {
        sol.u10_cycle = x;
        sol.u20_cycle = u_th - x;
        sol.t1 = s.t1;
        sol.t2 = s.t2;
        sol.f = 1.0 / (s.t1 + s.t2);
        sol.on_piece = s.on_piece;
        sol.off_piece = s.off_piece;
    };
    auto apply = [&](double x) {
        ++sol.iterations;
        return cycle_map(c, x, u_th - x);
    };

    // The turn-on state is pinned to u1 + u2 = u_th; iterate on x = u10.
    double x_prev = startup.u10;
    CycleStep s_prev = apply(x_prev);
    double h_prev = s_prev.u10_next - x_prev;
    record(x_prev, s_prev);
    if (std::abs(h_prev) <= std::max(tol_abs, noise_floor)) {
        sol.converged = true;
        return sol;
    }

    double x = s_prev.u10_next;
    while (sol.iterations < options.max_cycles) {
        CycleStep s;
        try {
            s = apply(x);
        } catch (const NoCrossing&) {
            // A secant step left the physical range; fall back to the plain map.
            x = s_prev.u10_next;
            continue;
        }
        const double h = s.u10_next - x;
        record(x, s);

        double x_next = s.u10_next;
        const double denom = h - h_prev;
        if (denom != 0.0) {
            const double secant = x - h * (x - x_prev) / denom;
            // Keep the secant step only if it moves no farther than a generous
            // multiple of the plain step would.
            if (std::isfinite(secant) && std::abs(secant - x) <= 1e8 * std::abs(h)) {
                x_next = secant;
            }
        }
        const double step = std::abs(x_next - x);
        if (std::abs(h) <= noise_floor || (std::abs(h) <= tol_abs && step <= tol_abs)) {
            sol.converged = true;
            return sol;
        }
        x_prev = x;
        h_prev = h;
        s_prev = s;
        x = x_next;
    }

    std::ostringstream os;
    os << "limit cycle did not converge after " << sol.iterations << " cycle-map evaluations (last u10 = "
       << sol.u10_cycle << " V, f = " << sol.f << " Hz)";
    throw NonConvergence(os.str(), sol);
}

Waveform sample_waveform(const CircuitParams& c, double t_end, double dt) {
    if (!(dt > 0.0) || !(t_end > 0.0)) {
        throw InvalidParameter("sample_waveform: violated dt > 0 and t_end > 0");
    }
    const SwitchParams& sw = c.switch_params();
    const auto n = static_cast<std::size_t>(std::floor(t_end / dt)) + 1;

    Waveform wf;
    wf.samples.reserve(n);

    PhasePiece piece = start_piece(segment_params(c, SwitchState::Off), 0.0, 0.0, 0.0);
    double t_switch = piece.t_start + crossing_time(piece, sw.u_th());
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        while (t >= t_switch) {
            const PhaseValue end = eval_phase(piece, t_switch - piece.t_start);
            const SwitchState next_state = piece.state == SwitchState::Off ? SwitchState::On : SwitchState::Off;
            piece = start_piece(segment_params(c, next_state), end.u1, end.u2, t_switch);
            const double level = next_state == SwitchState::On ? sw.u_h() : sw.u_th();
            t_switch = piece.t_start + crossing_time(piece, level);
        }
        const PhaseValue v = eval_phase(piece, t - piece.t_start);
        wf.samples.push_back({t, v.u1, v.u2, v.usw, iv_current(v.usw, piece.state, sw), piece.state});
    }
    return wf;
}

}  // namespace relaxosc
