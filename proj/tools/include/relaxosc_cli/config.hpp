#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relaxosc/circuit_params.hpp"
#include "relaxosc/errors.hpp"
#include "relaxosc/rate_network.hpp"
#include "relaxosc/sigmoid_fit.hpp"

namespace relaxosc::cli {

enum class Command { Iv, Simulate, Sweep, Rcf, Fit, Ramp, Network, Jump };

/// Case-insensitive; nullopt for unknown names.
std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command c) noexcept;

/// Malformed config text. what() is "line L, column C: message".
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

struct RawValue {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;  // of the key
};

struct RawSection {
    std::size_t line = 0;
    std::map<std::string, RawValue> keys;
};

/// Tokenizes the INI-style text: `[section]` headers, whitespace-separated
/// key=value tokens (several per line allowed, also after a header), and
/// comments from '#' or ';' to end of line. Duplicate sections or keys are
/// errors.
std::map<std::string, RawSection> parse_ini(std::string_view text);

enum class GridScale { Linear, Log };

struct SweepSection {
    double r_min = 0.0;
    double r_max = 300.0;
    std::size_t points = 301;
    GridScale scale = GridScale::Linear;

    std::vector<double> grid() const;
};

struct RcfSection {
    double dr = 0.5;
};

enum class Engine { Analytic, Numeric };

struct SimulateSection {
    double t_end = 0.0;
    double dt = 0.0;
    Engine engine = Engine::Analytic;
};

struct RampSection {
    double r_start = 0.0;
    double r_end = 300.0;
    double t_end = 1.0;
    /// 0 picks the default step at the larger end resistance.
    double dt = 0.0;
};

struct IvSection {
    double u_min = 0.0;
    /// 0 means 1.5 u_th.
    double u_max = 0.0;
    std::size_t points = 301;
};

struct NetworkSection {
    NetworkSpec spec;
    double duration = 0.0;
    double dt = 0.0;
    /// Rates are reported over [rate_start, duration).
    double rate_start = 0.0;
};

struct ExperimentSpec {
    Command command = Command::Sweep;
    std::optional<SwitchParams> switch_params;
    std::optional<CircuitParams> circuit;
    SweepSection sweep;
    RcfSection rcf;
    std::optional<SimulateSection> simulate;
    RampSection ramp;
    FitOptions fit;
    IvSection iv;
    std::optional<NetworkSection> network;
};

/// Parses and validates a config. Sections absent from the text keep their
/// defaults. Spike-time files named by stim.<id>.file are resolved against
/// base_dir and loaded here. Throws ParseError on syntax errors and unknown
/// sections or keys, InvalidParameter on values that violate a module
/// invariant.
ExperimentSpec parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

/// Checks that the sections `spec.command` needs are present.
void require_sections(const ExperimentSpec& spec);

}  // namespace relaxosc::cli
