#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "relaxosc/analytic_engine.hpp"
#include "relaxosc/errors.hpp"
#include "relaxosc/numeric_oracle.hpp"
#include "relaxosc/rate_network.hpp"

namespace relaxosc {
namespace {

using testing::rel_diff;

// Fast circuit (about 1.4 kHz at r = 0) so short runs see many spikes.
CircuitParams neuron_circuit() { return testing::fig3_circuit().with_r(0.0); }

CounterParams counter() { return {0.01, {0.0, 10.0, {0.0, 300.0}}}; }

double guard_dt(const CircuitParams& c) { return kDefaultStepFraction / fastest_rate(c, 300.0); }

TEST(OutputRate, CountsHalfOpenWindow) {
    const SpikeTrain s{{0.1, 0.2, 0.3}};
    EXPECT_DOUBLE_EQ(output_rate(s, 0.0, 1.0), 3.0);
    EXPECT_DOUBLE_EQ(output_rate(s, 0.2, 0.3), 10.0);
    EXPECT_DOUBLE_EQ(output_rate(SpikeTrain{}, 0.0, 2.0), 0.0);
    EXPECT_THROW(output_rate(s, 1.0, 1.0), InvalidParameter);
}

TEST(RegularSpikes, MidWindowTimes) {
    const auto t = regular_spike_times(10.0, 0.3);
    ASSERT_EQ(t.size(), 3u);
    EXPECT_DOUBLE_EQ(t[0], 0.05);
    EXPECT_DOUBLE_EQ(t[2], 0.25);
}

TEST(NetworkSpec, Validation) {
    const CircuitParams c = neuron_circuit();
    NetworkSpec spec{{{"a", c, counter()}, {"b", c, counter()}}, {}, {}};
    EXPECT_NO_THROW(spec.validate());

    NetworkSpec dup = spec;
    dup.neurons[1].id = "a";
    EXPECT_THROW(dup.validate(), InvalidParameter);

    NetworkSpec loop = spec;
    loop.edges = {{"a", "a", 1}};
    EXPECT_THROW(loop.validate(), InvalidParameter);

    NetworkSpec dangling = spec;
    dangling.edges = {{"a", "z", 1}};
    EXPECT_THROW(dangling.validate(), InvalidParameter);

    NetworkSpec sign = spec;
    sign.edges = {{"a", "b", 2}};
    EXPECT_THROW(sign.validate(), InvalidParameter);

    NetworkSpec unsorted = spec;
    unsorted.stimuli = {{"a", SpikeInput{{0.2, 0.1}, 1}}};
    EXPECT_THROW(unsorted.validate(), InvalidParameter);

    EXPECT_EQ(spec.index_of("b"), 1u);
    EXPECT_THROW(spec.index_of("z"), InvalidParameter);
}

TEST(Network, RejectsStepAboveGuard) {
    const CircuitParams c = neuron_circuit();
    const NetworkSpec spec{{{"a", c, counter()}}, {}, {}};
    EXPECT_THROW(simulate_network(spec, 0.01, 2.0 * kStepGuard / fastest_rate(c, 300.0)), StepTooLarge);
}

TEST(Network, FreeRunningNeuronMatchesLimitCycle) {
    const CircuitParams c = neuron_circuit();
    const NetworkSpec spec{{{"a", c, counter()}}, {}, {}};
    const NetworkResult res = simulate_network(spec, 0.05, guard_dt(c));
    const double rate = output_rate(res.train("a"), 0.01, 0.05);
    EXPECT_LT(rel_diff(rate, limit_cycle(c).f), 0.01);
}

TEST(Network, DecoupledNeuronsRunIndependently) {
    const CircuitParams c = neuron_circuit();
    const NetworkSpec single{{{"a", c, counter()}}, {}, {}};
    const NetworkSpec pair{{{"a", c, counter()}, {"b", c, counter()}}, {}, {}};
    const double dt = guard_dt(c);
    const NetworkResult one = simulate_network(single, 0.02, dt);
    const NetworkResult two = simulate_network(pair, 0.02, dt);
    EXPECT_EQ(one.train("a").times, two.train("a").times);
    EXPECT_EQ(two.train("a").times, two.train("b").times);
}

TEST(Network, IdenticalRunsAreIdentical) {
    const CircuitParams c = neuron_circuit();
    const NetworkSpec spec{{{"a", c, counter()}, {"b", c, counter()}},
                           {{"a", "b", 1}},
                           {{"a", SpikeInput{regular_spike_times(2000.0, 0.03), 1}}}};
    const double dt = guard_dt(c);
    EXPECT_EQ(simulate_network(spec, 0.03, dt).trains.at(1).times,
              simulate_network(spec, 0.03, dt).trains.at(1).times);
}

TEST(Network, ReceptorSetsResistanceDirectly) {
    const CircuitParams c = neuron_circuit();
    const ReceptorMap map{LinearReceptor{0.0, 1.0}, {0.0, 300.0}};
    const NetworkSpec spec{{{"a", c, counter()}}, {}, {{"a", ReceptorInput{map, [](double) { return 250.0; }}}}};
    const NetworkResult res = simulate_network(spec, 0.02, guard_dt(c));
    const double rate = output_rate(res.train("a"), 0.005, 0.02);
    EXPECT_LT(rel_diff(rate, limit_cycle(c.with_r(250.0)).f), 0.02);
}

TEST(Network, InhibitoryEdgeLowersRate) {
    const CircuitParams c = neuron_circuit();
    const double duration = 0.1;
    const auto drive = regular_spike_times(2000.0, duration);
    NetworkSpec excit{{{"b", c, counter()}, {"inh", c, counter()}}, {}, {{"b", SpikeInput{drive, 1}}}};
    NetworkSpec both = excit;
    both.edges = {{"inh", "b", -1}};
    const double dt = guard_dt(c);
    const double r_exc = output_rate(simulate_network(excit, duration, dt).train("b"), 0.03, duration);
    const double r_inh = output_rate(simulate_network(both, duration, dt).train("b"), 0.03, duration);
    EXPECT_LT(r_inh, r_exc);
}

}  // namespace
}  // namespace relaxosc
