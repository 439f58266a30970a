#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "relaxosc_cli/config.hpp"
#include "relaxosc_cli/experiment.hpp"

namespace fs = std::filesystem;
using namespace relaxosc::cli;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw relaxosc::InvalidParameter("cannot open config " + path.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw relaxosc::Error("cannot write " + path.string());
    }
    out << content;
}

// net.csv + "n1" -> net.n1.csv
fs::path sibling(const fs::path& out, const std::string& id) {
    fs::path p = out;
    p.replace_filename(out.stem().string() + "." + id + out.extension().string());
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relaxation oscillator simulator and characterization toolkit"};
    std::string command_name;
    std::string config_path;
    std::string out_path;
    std::string format_name;
    std::string svg_path;
    app.add_option("command", command_name, "iv|simulate|sweep|rcf|fit|ramp|network|jump")->required();
    app.add_option("--config", config_path, "Experiment config file")->required();
    app.add_option("--out", out_path, "Output file (default: stdout)");
    app.add_option("--format", format_name, "csv|json")->check(CLI::IsMember({"csv", "json"}, CLI::ignore_case));
    app.add_option("--svg", svg_path, "Also write an SVG line plot");
    CLI11_PARSE(app, argc, argv);

    try {
        const auto command = parse_command(command_name);
        if (!command) {
            std::cerr << "relaxosc: unknown command '" << command_name << "'\n";
            return 2;
        }
        const fs::path config(config_path);
        ExperimentSpec spec = parse_config(read_file(config), config.parent_path());
        spec.command = *command;

        const Artifact artifact = run_experiment(spec);
        for (const std::string& w : artifact.warnings) {
            std::cerr << "relaxosc: warning: " << w << '\n';
        }
        Format format = artifact.default_format;
        if (!format_name.empty()) {
            format = CLI::detail::to_lower(format_name) == "json" ? Format::Json : Format::Csv;
        }

        const std::string body = render(artifact, format);
        if (out_path.empty()) {
            std::cout << body;
        } else {
            write_file(out_path, body);
            for (const auto& [id, table] : artifact.extras) {
                write_file(sibling(out_path, id), render_extra(table, format));
            }
        }
        if (!svg_path.empty()) {
            write_file(svg_path, render_svg(artifact.plot));
        }
    } catch (const std::exception& e) {
        std::cerr << "relaxosc: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
