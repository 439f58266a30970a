#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "relaxosc/circuit_params.hpp"
#include "relaxosc/conversion_module.hpp"
#include "relaxosc/waveform.hpp"

namespace relaxosc {

struct NeuronSpec {
    std::string id;
    /// Oscillator; its r is ignored (the conversion module sets it).
    CircuitParams circuit;
    ConversionParams cm;
};

struct EdgeSpec {
    std::string source;
    std::string target;
    int sign = +1;  // +1 excitatory, -1 inhibitory
};

/// External spike train delivered to the target's conversion module.
struct SpikeInput {
    std::vector<double> times;
    int sign = +1;
};

/// Receptor neuron: the stimulus drives the control resistance directly and
/// bypasses the target's conversion module.
struct ReceptorInput {
    ReceptorMap map;
    std::function<double(double)> stimulus;  // stimulus(t)
};

struct StimulusSpec {
    std::string target;
    std::variant<SpikeInput, ReceptorInput> input;
};

struct NetworkSpec {
    std::vector<NeuronSpec> neurons;
    std::vector<EdgeSpec> edges;
    std::vector<StimulusSpec> stimuli;

    /// Unique ids, edges and stimuli referencing existing neurons, no
    /// self-loops, signs in {-1, +1}, valid conversion modules.
    void validate() const;
    /// Index of `id` in neurons; throws InvalidParameter when absent.
    std::size_t index_of(const std::string& id) const;
};

struct NetworkResult {
    std::vector<std::string> ids;
    std::vector<SpikeTrain> trains;

    const SpikeTrain& train(const std::string& id) const;
};

/// Lock-step co-simulation. Each step of length dt every conversion module
/// consumes the spikes its in-edges emitted during the previous step (one
/// step of delay) plus external spikes in [t, t + dt), then the oscillator
/// advances one step at the resulting resistance. dt must resolve each
/// oscillator at its clamp ceiling; lower resistances that the step cannot
/// resolve use the quasi-static reduction of the numeric integrator.
NetworkResult simulate_network(const NetworkSpec& spec, double duration, double dt);

/// Events in [t_start, t_end) divided by the window length.
double output_rate(const SpikeTrain& train, double t_start, double t_end);

/// Spikes at (k + 1/2) / rate for k = 0, 1, ... while below t_end.
std::vector<double> regular_spike_times(double rate, double t_end);

}  // namespace relaxosc
