#include "relaxosc/rate_network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "relaxosc/errors.hpp"
#include "relaxosc/numeric_oracle.hpp"

namespace relaxosc {

void NetworkSpec::validate() const {
    std::unordered_set<std::string> ids;
    for (const NeuronSpec& n : neurons) {
        if (n.id.empty()) {
            throw InvalidParameter("network: neuron id must be nonempty");
        }
        if (!ids.insert(n.id).second) {
            throw InvalidParameter("network: duplicate neuron id '" + n.id + "'");
        }
        ConversionModule{n.cm};
    }
    for (const EdgeSpec& e : edges) {
        if (!ids.contains(e.source) || !ids.contains(e.target)) {
            throw InvalidParameter("network: edge " + e.source + " -> " + e.target + " references an unknown neuron");
        }
        if (e.source == e.target) {
            throw InvalidParameter("network: self-loop on '" + e.source + "' is not allowed");
        }
        if (e.sign != 1 && e.sign != -1) {
            throw InvalidParameter("network: edge sign must be +1 or -1");
        }
    }
    std::unordered_set<std::string> receptor_targets;
    for (const StimulusSpec& s : stimuli) {
        if (!ids.contains(s.target)) {
            throw InvalidParameter("network: stimulus targets unknown neuron '" + s.target + "'");
        }
        if (const auto* in = std::get_if<SpikeInput>(&s.input)) {
            if (in->sign != 1 && in->sign != -1) {
                throw InvalidParameter("network: stimulus sign must be +1 or -1");
            }
            if (!std::is_sorted(in->times.begin(), in->times.end())) {
                throw InvalidParameter("network: stimulus spike times for '" + s.target + "' must be sorted");
            }
        } else {
            const auto& rec = std::get<ReceptorInput>(s.input);
            rec.map.validate();
            if (!rec.stimulus) {
                throw InvalidParameter("network: receptor stimulus for '" + s.target + "' is empty");
            }
            if (!receptor_targets.insert(s.target).second) {
                throw InvalidParameter("network: more than one receptor stimulus on '" + s.target + "'");
            }
        }
    }
}

std::size_t NetworkSpec::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < neurons.size(); ++i) {
        if (neurons[i].id == id) {
            return i;
        }
    }
    throw InvalidParameter("network: unknown neuron '" + id + "'");
}

const SpikeTrain& NetworkResult::train(const std::string& id) const {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == id) {
            return trains[i];
        }
    }
    throw InvalidParameter("network result: unknown neuron '" + id + "'");
}

NetworkResult simulate_network(const NetworkSpec& spec, double duration, double dt) {
    spec.validate();
    if (!(duration > 0.0) || !(dt > 0.0)) {
        throw InvalidParameter("network: violated duration > 0 and dt > 0");
    }
    const std::size_t n = spec.neurons.size();

    struct External {
        const SpikeInput* input;
        std::size_t cursor = 0;
    };
    struct Incoming {
        std::size_t source;
        int sign;
    };
    struct NeuronRun {
        OscillatorStepper stepper;
        ConversionModule cm;
        const ReceptorInput* receptor = nullptr;
        std::vector<External> external;
        std::vector<Incoming> incoming;
    };

    std::vector<NeuronRun> runs;
    runs.reserve(n);
    for (const NeuronSpec& ns : spec.neurons) {
        ConversionModule cm(ns.cm);
        const double ceiling = cm.clamp().r_max;
        const double limit = kStepGuard / fastest_rate(ns.circuit, ceiling);
        if (dt > limit) {
            std::ostringstream os;
            os << "network: dt = " << dt << " s exceeds the step guard " << limit << " s of neuron '" << ns.id
               << "' at r = " << ceiling << " ohm";
            throw StepTooLarge(os.str());
        }
        runs.push_back({OscillatorStepper(ns.circuit, StiffPolicy::Reduce), std::move(cm), nullptr, {}, {}});
    }
    for (const StimulusSpec& s : spec.stimuli) {
        NeuronRun& run = runs[spec.index_of(s.target)];
        if (const auto* in = std::get_if<SpikeInput>(&s.input)) {
            run.external.push_back({in, 0});
        } else {
            run.receptor = &std::get<ReceptorInput>(s.input);
        }
    }
    for (const EdgeSpec& e : spec.edges) {
        runs[spec.index_of(e.target)].incoming.push_back({spec.index_of(e.source), e.sign});
    }

    NetworkResult result;
    result.trains.resize(n);
    for (const NeuronSpec& ns : spec.neurons) {
        result.ids.push_back(ns.id);
    }

    std::vector<std::vector<double>> emitted_prev(n);
    std::vector<std::vector<double>> emitted_now(n);
    std::vector<InputSpike> inbox;
    std::vector<SwitchEvent> events;

    const auto n_steps = static_cast<std::size_t>(std::ceil(duration / dt));
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double t_next = std::min(static_cast<double>(k + 1) * dt, duration);
        for (std::size_t i = 0; i < n; ++i) {
            NeuronRun& run = runs[i];
            inbox.clear();
            for (External& ext : run.external) {
                const auto& times = ext.input->times;
                while (ext.cursor < times.size() && times[ext.cursor] < t_next) {
                    if (times[ext.cursor] >= t) {
                        inbox.push_back({times[ext.cursor], ext.input->sign});
                    }
                    ++ext.cursor;
                }
            }
            for (const Incoming& in : run.incoming) {
                for (double ts : emitted_prev[in.source]) {
                    inbox.push_back({ts, in.sign});
                }
            }
            double r = run.cm.step(inbox, t_next - t);
            if (run.receptor != nullptr) {
                r = receptor_resistance(run.receptor->map, run.receptor->stimulus(t));
            }

            events.clear();
            emitted_now[i].clear();
            run.stepper.advance_to(t_next, r, events);
            for (const SwitchEvent& e : events) {
                if (e.to == SwitchState::On) {
                    emitted_now[i].push_back(e.t);
                    result.trains[i].times.push_back(e.t);
                }
            }
        }
        std::swap(emitted_prev, emitted_now);
    }
    return result;
}

double output_rate(const SpikeTrain& train, double t_start, double t_end) {
    if (!(t_end > t_start)) {
        throw InvalidParameter("output_rate: violated t_end > t_start");
    }
    const auto lo = std::lower_bound(train.times.begin(), train.times.end(), t_start);
    const auto hi = std::lower_bound(train.times.begin(), train.times.end(), t_end);
    return static_cast<double>(hi - lo) / (t_end - t_start);
}

std::vector<double> regular_spike_times(double rate, double t_end) {
    std::vector<double> times;
    if (!(rate > 0.0)) {
        return times;
    }
    for (std::size_t k = 0;; ++k) {
        const double t = (static_cast<double>(k) + 0.5) / rate;
        if (t >= t_end) {
            break;
        }
        times.push_back(t);
    }
    return times;
}

}  // namespace relaxosc
