#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relaxosc_cli/config.hpp"
#include "relaxosc_cli/output.hpp"

namespace relaxosc::cli {

enum class Format { Csv, Json };

struct Artifact {
    /// Primary result table.
    Table table;
    /// Emit the table as one JSON object instead of an array (FIT, JUMP).
    bool single_record = false;
    Format default_format = Format::Csv;
    /// Extra named tables (NETWORK: one spike train per neuron id).
    std::vector<std::pair<std::string, Table>> extras;
    Plot plot;
    /// Non-fatal diagnostics (e.g. sweep points that failed).
    std::vector<std::string> warnings;
};

/// Runs spec.command. Module errors propagate as relaxosc::Error.
Artifact run_experiment(const ExperimentSpec& spec);

/// Serialized primary table in the requested format.
std::string render(const Artifact& a, Format f);
/// Serialized extra table.
std::string render_extra(const Table& t, Format f);

}  // namespace relaxosc::cli
