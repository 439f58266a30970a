#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "relaxosc/analytic_engine.hpp"
#include "relaxosc/characterization.hpp"
#include "relaxosc/numeric_oracle.hpp"

namespace relaxosc {
namespace {

using testing::fig3_circuit;
using testing::fig5_circuit;
using testing::rel_diff;

// Random piece with a random initial condition inside a plausible band.
PhasePiece random_piece(std::mt19937_64& rng) {
    const CircuitParams c = testing::random_circuit(rng);
    const SwitchState s = std::bernoulli_distribution(0.5)(rng) ? SwitchState::On : SwitchState::Off;
    std::uniform_real_distribution<double> u(-2.0, 4.0);
    return start_piece(phase_params(c, s), u(rng), u(rng));
}

TEST(PhaseParams, Fig3SubstitutionOn) {
    const PhasePiece p = phase_params(fig3_circuit(), SwitchState::On);
    EXPECT_DOUBLE_EQ(p.b, 3.0);
    EXPECT_DOUBLE_EQ(p.a1, 5.0e5);
    EXPECT_DOUBLE_EQ(p.v0, 0.6);
    EXPECT_DOUBLE_EQ(p.r_sw, 200.0);
}

TEST(PhaseParams, EigenvaluesMatchCharacteristicPolynomial) {
    for (SwitchState s : {SwitchState::Off, SwitchState::On}) {
        const PhasePiece p = phase_params(fig3_circuit(), s);
        // dU/dt = M U + const with M = [[-a1 b, -a1], [-a2, -a2]]
        const auto ev = testing::decay_rates(-p.a1 * p.b, -p.a1, -p.a2, -p.a2);
        EXPECT_LT(rel_diff(p.alpha1, ev.slow), 1e-10);
        EXPECT_LT(rel_diff(p.alpha2, ev.fast), 1e-10);
        EXPECT_LT(rel_diff(p.alpha1 * p.alpha2, p.a1 * p.a2 * (p.b - 1.0)), 1e-10);
        EXPECT_LT(rel_diff(p.alpha1 + p.alpha2, p.a1 * p.b + p.a2), 1e-12);
    }
}

TEST(PhaseParams, DiscriminantPositiveAndOrdered) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        const CircuitParams c = testing::random_circuit(rng);
        for (SwitchState s : {SwitchState::Off, SwitchState::On}) {
            const PhasePiece p = phase_params(c, s);
            EXPECT_GT(p.d, 0.0);
            EXPECT_GT(p.alpha1, 0.0);
            EXPECT_LT(p.alpha1, p.alpha2);
            EXPECT_GE(p.b, 1.0);
        }
    }
}

TEST(PhaseParams, ZeroResistanceNeedsReducedModel) {
    EXPECT_THROW(phase_params(fig5_circuit(0.0), SwitchState::Off), DegenerateResistance);
    const PhasePiece p = segment_params(fig5_circuit(0.0), SwitchState::Off);
    EXPECT_TRUE(p.shorted);
}

TEST(FitInitial, StationaryPointHasZeroCoefficients) {
    const PhasePiece p = phase_params(fig3_circuit(), SwitchState::Off);
    const SolutionCoefficients m = fit_initial(p, 0.0, p.v0);
    EXPECT_EQ(m.m1, 0.0);
    EXPECT_EQ(m.m2, 0.0);
}

TEST(FitInitial, DischargedStartMatchesLinearSolve) {
    for (SwitchState s : {SwitchState::Off, SwitchState::On}) {
        const PhasePiece p = phase_params(fig3_circuit(), s);
        const SolutionCoefficients m = fit_initial(p, 0.0, 0.0);
        // -a1 (m1 + m2) = u10, beta1 m1 + beta2 m2 = u20 - v0
        const auto [m1, m2] = testing::solve2(-p.a1, -p.a1, p.beta1, p.beta2, 0.0, -p.v0);
        EXPECT_LT(rel_diff(m.m1, m1), 1e-12);
        EXPECT_LT(rel_diff(m.m2, m2), 1e-12);
        EXPECT_LT(rel_diff(m.m1, -p.v0 / (p.beta1 - p.beta2)), 1e-12);
        EXPECT_LT(rel_diff(m.m2, p.v0 / (p.beta1 - p.beta2)), 1e-12);
    }
}

TEST(FitInitial, RoundTripThroughEvalPhase) {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 1000; ++i) {
        const PhasePiece p = random_piece(rng);
        const PhaseValue v = eval_phase(p, 0.0);
        EXPECT_NEAR(v.u1, p.u10, 1e-12 * std::max(1.0, std::abs(p.u10)));
        EXPECT_NEAR(v.u2, p.u20, 1e-12 * std::max(1.0, std::abs(p.u20)));
    }
}

TEST(EvalPhase, InitialAndAsymptoticValues) {
    const PhasePiece p = start_piece(phase_params(fig3_circuit(), SwitchState::Off), 0.5, 3.5);
    const PhaseValue v0 = eval_phase(p, 0.0);
    EXPECT_DOUBLE_EQ(v0.usw, v0.u1 + v0.u2);
    const PhaseValue late = eval_phase(p, 50.0 / p.alpha1);
    EXPECT_NEAR(late.u1, 0.0, 1e-10 * p.v0);
    EXPECT_LT(rel_diff(late.u2, p.v0), 1e-10);
    EXPECT_LT(rel_diff(late.usw, p.v0), 1e-10);
}

TEST(EvalPhase, OdeResidualByCentralDifferences) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        const PhasePiece p = random_piece(rng);
        const double t = testing::log_uniform(rng, 1.0 / p.alpha2, 3.0 / p.alpha1);
        const auto res = testing::ode_residual(
            [&](double s) {
                const PhaseValue v = eval_phase(p, s);
                return std::pair{v.u1, v.u2};
            },
            p.a1, p.a2, p.b, p.v0, t);
        EXPECT_LE(res.worst(), 1e-6) << "t = " << t;
    }
}

TEST(CrossingTime, SingleCapacitorStartupMatchesClosedForm) {
    const CircuitParams c = fig5_circuit(0.0);
    const StartupTransient st = startup_transient(c);
    const double expected = testing::rc_time(40000.0, 1e-6, 150e-6, 0.0, 4.0);
    EXPECT_LT(rel_diff(st.t0, expected), 1e-9);
}

TEST(CrossingTime, LevelAboveAsymptoteHasNoCrossing) {
    const PhasePiece p = start_piece(phase_params(fig3_circuit(), SwitchState::Off), 0.0, 0.0);
    EXPECT_THROW(crossing_time(p, p.v0 * 1.1), NoCrossing);
    const PhasePiece q = start_piece(phase_params(fig5_circuit(100.0), SwitchState::Off), 0.0, 0.0);
    EXPECT_THROW(crossing_time(q, 4.0, 1e-6), NoCrossing);
}

TEST(CrossingTime, RootSatisfiesLevel) {
    std::mt19937_64 rng(14);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const PhasePiece p = random_piece(rng);
        const double usw0 = p.u10 + p.u20;
        const double level = std::uniform_real_distribution<double>(std::min(usw0, p.v0), std::max(usw0, p.v0))(rng);
        if (std::abs(level - usw0) < 1e-6 || std::abs(level - p.v0) < 1e-6) {
            continue;
        }
        double t = 0.0;
        try {
            t = crossing_time(p, level);
        } catch (const NoCrossing&) {
            continue;
        }
        ++checked;
        EXPECT_GT(t, 0.0);
        EXPECT_LE(std::abs(eval_phase(p, t).usw - level), 1e-9 * 4.0);
    }
    EXPECT_GT(checked, 500);
}

TEST(Startup, Fig3TransientAgainstNumericFirstSpike) {
    const CircuitParams c = fig3_circuit();
    const StartupTransient st = startup_transient(c);
    EXPECT_GT(st.t0, 0.0);
    EXPECT_LT(rel_diff(st.u10 + st.u20, 4.0), 1e-9);

    const IntegrationResult run = integrate(c, 1.5 * st.t0, default_step(c));
    ASSERT_FALSE(run.spikes.empty());
    EXPECT_LT(rel_diff(run.spikes.times.front(), st.t0), 1e-3);
}

TEST(LimitCycle, StitchLevelsAndPeriod) {
    for (double r : {0.0, 1.0, 50.0, 190.0, 300.0, 1e4}) {
        const CircuitParams c = fig5_circuit(r);
        const CycleSolution s = limit_cycle(c);
        EXPECT_TRUE(s.converged);
        EXPECT_GT(s.t0, 0.0);
        EXPECT_GT(s.t1, 0.0);
        EXPECT_GT(s.t2, 0.0);
        EXPECT_EQ(s.f, 1.0 / (s.t1 + s.t2));
        EXPECT_NEAR(eval_phase(s.on_piece, 0.0).usw, 4.0, 1e-9 * 4.0);
        EXPECT_NEAR(eval_phase(s.on_piece, s.t1).usw, 2.0, 1e-9 * 4.0);
        EXPECT_NEAR(eval_phase(s.off_piece, 0.0).usw, 2.0, 1e-9 * 4.0);
        EXPECT_NEAR(eval_phase(s.off_piece, s.t2).usw, 4.0, 1e-9 * 4.0);
    }
}

TEST(LimitCycle, ZeroResistanceIsSingleCapacitorOnC2) {
    const double f = limit_cycle(fig5_circuit(0.0)).f;
    EXPECT_LT(rel_diff(f, 1.0 / testing::single_cap_period(testing::reference_switch(), 150e-6, 1e-6)), 1e-6);
}

TEST(LimitCycle, LargeResistanceApproachesSeriesCapacitance) {
    const CircuitParams c = fig5_circuit(1e9);
    const double f = limit_cycle(c).f;
    const double expected = 1.0 / testing::single_cap_period(testing::reference_switch(), 150e-6, c.series_capacitance());
    EXPECT_LT(rel_diff(f, expected), 1e-3);
}

TEST(LimitCycle, Fig3Values) {
    const CycleSolution s = limit_cycle(fig3_circuit());
    EXPECT_NEAR(s.f, 2159.2, 0.1);
}

TEST(LimitCycle, AgreesWithNumericOracle) {
    std::mt19937_64 rng(15);
    for (int i = 0; i < 10; ++i) {
        const CircuitParams c = testing::random_circuit(rng);
        const double fa = limit_cycle(c).f;
        const double fn = oracle_frequency(c);
        EXPECT_LT(rel_diff(fn, fa), 1e-3) << "c1=" << c.c1() << " c2=" << c.c2() << " r=" << c.r() << " i0=" << c.i0();
    }
}

TEST(LimitCycle, TighterToleranceDoesNotMoveFrequency) {
    std::mt19937_64 rng(16);
    for (int i = 0; i < 20; ++i) {
        const CircuitParams c = testing::random_circuit(rng);
        const double loose = limit_cycle(c, {1e-10, 1000}).f;
        const double tight = limit_cycle(c, {1e-13, 1000}).f;
        EXPECT_LT(rel_diff(tight, loose), 1e-8);
    }
}

TEST(LimitCycle, CapacitanceScalingScalesFrequency) {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20; ++i) {
        const CircuitParams c = testing::random_circuit(rng);
        const double k = testing::log_uniform(rng, 0.1, 10.0);
        const double f = limit_cycle(c).f;
        const double fk = limit_cycle(c.with_capacitances(k * c.c1(), k * c.c2())).f;
        EXPECT_LT(rel_diff(fk, f / k), 1e-9);
    }
}

TEST(CycleMap, ContractsAfterFirstCycles) {
    std::mt19937_64 rng(18);
    for (int i = 0; i < 20; ++i) {
        const CircuitParams c = testing::random_circuit(rng);
        const StartupTransient st = startup_transient(c);
        double u10 = st.u10;
        double u20 = st.u20;
        std::vector<double> dist;
        for (int k = 0; k < 30; ++k) {
            const CycleStep step = cycle_map(c, u10, u20);
            dist.push_back(std::hypot(step.u10_next - u10, step.u20_next - u20));
            u10 = step.u10_next;
            u20 = step.u20_next;
        }
        for (std::size_t k = 4; k < dist.size(); ++k) {
            if (dist[k - 1] < 1e-12) {
                break;
            }
            EXPECT_LE(dist[k], 1.05 * dist[k - 1]) << "cycle " << k;
        }
    }
}

TEST(SampleWaveform, StaysInBandAndCurrentJumpsAtTurnOn) {
    const CircuitParams c = fig3_circuit();
    const CycleSolution s = limit_cycle(c);
    const double dt = s.period() / 400.0;
    const Waveform w = sample_waveform(c, s.t0 + 5.0 * s.period(), dt);
    ASSERT_GT(w.samples.size(), 100u);
    const double eps = 1e-6 * 4.0;
    int jumps = 0;
    for (std::size_t i = 1; i < w.samples.size(); ++i) {
        const WaveformSample& prev = w.samples[i - 1];
        const WaveformSample& cur = w.samples[i];
        EXPECT_GT(cur.t, prev.t);
        EXPECT_DOUBLE_EQ(cur.usw, cur.u1 + cur.u2);
        if (cur.t > s.t0) {
            EXPECT_GE(cur.usw, 2.0 - eps);
            EXPECT_LE(cur.usw, 4.0 + eps);
        }
        if (prev.state == SwitchState::Off && cur.state == SwitchState::On) {
            EXPECT_GT(cur.isw, prev.isw);
            ++jumps;
        }
    }
    EXPECT_GE(jumps, 5);
}

TEST(SampleWaveform, MatchesNumericOraclePointwise) {
    const CircuitParams c = fig3_circuit();
    const CycleSolution s = limit_cycle(c);
    const double t_end = s.t0 + 4.0 * s.period();
    const double dt = default_step(c);
    const IntegrationResult num = integrate(c, t_end, dt);
    ASSERT_FALSE(num.spikes.empty());
    const double shift = num.spikes.times.front() - s.t0;
    const Waveform ana = sample_waveform(c, t_end, dt);
    const std::size_t n = std::min(ana.samples.size(), num.waveform.samples.size());
    ASSERT_GT(n + 2, ana.samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < n; i += 7) {
        const double t = num.waveform.samples[i].t - shift;
        if (t < 0.0 || t / dt + 1.0 >= static_cast<double>(n)) {
            continue;
        }
        // Interpolate the analytic samples at the shifted time.
        const auto k = static_cast<std::size_t>(t / dt);
        const double theta = t / dt - static_cast<double>(k);
        const double usw = (1.0 - theta) * ana.samples[k].usw + theta * ana.samples[k + 1].usw;
        worst = std::max(worst, std::abs(usw - num.waveform.samples[i].usw));
    }
    EXPECT_LT(worst, 5e-3 * 4.0);
}

}  // namespace
}  // namespace relaxosc
