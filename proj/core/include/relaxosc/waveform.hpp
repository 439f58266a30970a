#pragma once

#include <vector>

#include "relaxosc/switch_model.hpp"

namespace relaxosc {

struct WaveformSample {
    double t;
    double u1;
    double u2;
    double usw;
    double isw;
    SwitchState state;
};

/// Densely sampled oscillogram. Samples are strictly increasing in t and
/// usw == u1 + u2 at every sample.
struct Waveform {
    std::vector<WaveformSample> samples;
};

/// OFF->ON transition instants, strictly increasing. May be empty.
struct SpikeTrain {
    std::vector<double> times;

    std::size_t size() const noexcept { return times.size(); }
    bool empty() const noexcept { return times.empty(); }
};

struct SwitchEvent {
    double t;
    SwitchState to;
};

}  // namespace relaxosc
