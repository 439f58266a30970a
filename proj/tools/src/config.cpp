#include "relaxosc_cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "relaxosc/characterization.hpp"

namespace relaxosc::cli {
namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return out;
}

bool is_space(char ch) { return ch == ' ' || ch == '\t' || ch == '\r'; }

std::optional<double> to_double(std::string_view s) {
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

std::optional<long long> to_integer(std::string_view s) {
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return v;
}

std::size_t value_column(const RawValue& v, std::string_view key) { return v.column + key.size() + 1; }

// Typed access to one section; remembers which keys were consumed so that
// leftovers can be reported as unknown.
class SectionReader {
public:
    SectionReader(std::string name, const RawSection* raw) : name_(std::move(name)), raw_(raw) {}

    bool present() const noexcept { return raw_ != nullptr; }

    const RawValue* find(const std::string& key) {
        if (raw_ == nullptr) {
            return nullptr;
        }
        const auto it = raw_->keys.find(key);
        if (it == raw_->keys.end()) {
            return nullptr;
        }
        used_.insert(key);
        return &it->second;
    }

    std::optional<double> number(const std::string& key) {
        const RawValue* v = find(key);
        if (v == nullptr) {
            return std::nullopt;
        }
        const auto d = to_double(v->text);
        if (!d) {
            throw ParseError(v->line, value_column(*v, key),
                             "[" + name_ + "] " + key + ": expected a number, got '" + v->text + "'");
        }
        return d;
    }

    double required_number(const std::string& key) {
        const auto d = number(key);
        if (!d) {
            missing(key);
        }
        return *d;
    }

    std::optional<std::size_t> count(const std::string& key) {
        const RawValue* v = find(key);
        if (v == nullptr) {
            return std::nullopt;
        }
        const auto n = to_integer(v->text);
        if (!n || *n < 0) {
            throw ParseError(v->line, value_column(*v, key),
                             "[" + name_ + "] " + key + ": expected a nonnegative integer, got '" + v->text + "'");
        }
        return static_cast<std::size_t>(*n);
    }

    std::optional<std::string> text(const std::string& key) {
        const RawValue* v = find(key);
        if (v == nullptr) {
            return std::nullopt;
        }
        return v->text;
    }

    /// Value restricted to `choices` (compared case-insensitively).
    std::optional<std::string> choice(const std::string& key, std::initializer_list<std::string_view> choices) {
        const RawValue* v = find(key);
        if (v == nullptr) {
            return std::nullopt;
        }
        const std::string got = lower(v->text);
        for (std::string_view c : choices) {
            if (got == c) {
                return got;
            }
        }
        std::string list;
        for (std::string_view c : choices) {
            list += (list.empty() ? "" : "|") + std::string(c);
        }
        throw ParseError(v->line, value_column(*v, key),
                         "[" + name_ + "] " + key + ": expected " + list + ", got '" + v->text + "'");
    }

    [[noreturn]] void missing(const std::string& key) const {
        const std::size_t line = raw_ != nullptr ? raw_->line : 0;
        throw ParseError(line, 1, "[" + name_ + "] missing required key " + key);
    }

    void reject_unknown() const {
        if (raw_ == nullptr) {
            return;
        }
        const RawValue* first = nullptr;
        std::string first_key;
        for (const auto& [key, v] : raw_->keys) {
            if (used_.contains(key)) {
                continue;
            }
            if (first == nullptr || v.line < first->line || (v.line == first->line && v.column < first->column)) {
                first = &v;
                first_key = key;
            }
        }
        if (first != nullptr) {
            throw ParseError(first->line, first->column, "[" + name_ + "] unknown key " + first_key);
        }
    }

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
    const RawSection* raw_;
    std::set<std::string> used_;
};

// Re-raises module validation errors with the section they came from.
template <class F>
auto validated(const std::string& section, F&& build) {
    try {
        return build();
    } catch (const InvalidParameter& e) {
        throw InvalidParameter("[" + section + "] " + e.what());
    } catch (const DomainError& e) {
        throw InvalidParameter("[" + section + "] " + e.what());
    }
}

std::vector<double> load_spike_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidParameter("[network] cannot open spike-time file " + path.string());
    }
    std::vector<double> times;
    std::string token;
    bool first = true;
    while (in >> token) {
        const auto v = to_double(token);
        if (!v) {
            if (first && token == "t_s") {
                first = false;
                continue;
            }
            throw InvalidParameter("[network] " + path.string() + ": '" + token + "' is not a spike time");
        }
        first = false;
        times.push_back(*v);
    }
    return times;
}

struct Fields {
    std::map<std::string, const RawValue*> values;
    std::set<std::string> used;

    const RawValue* get(const std::string& field) {
        const auto it = values.find(field);
        if (it == values.end()) {
            return nullptr;
        }
        used.insert(field);
        return it->second;
    }
};

class NetworkParser {
public:
    NetworkParser(const RawSection& raw, const std::optional<SwitchParams>& sw,
                  const std::optional<CircuitParams>& circuit, const std::filesystem::path& base_dir)
        : raw_(raw), sw_(sw), circuit_(circuit), base_dir_(base_dir) {}

    NetworkSection parse() {
        NetworkSection out;
        std::map<long long, const RawValue*> edges;
        for (const auto& [key, v] : raw_.keys) {
            if (key == "duration_s" || key == "dt_s" || key == "rate_start_s") {
                continue;
            }
            const auto parts = split(key, '.');
            if (parts.size() == 3 && parts[0] == "neuron") {
                neurons_[parts[1]].values[parts[2]] = &v;
            } else if (parts.size() == 3 && parts[0] == "stim") {
                stims_[parts[1]].values[parts[2]] = &v;
            } else if (parts.size() == 2 && parts[0] == "edge") {
                const auto n = to_integer(parts[1]);
                if (!n) {
                    throw ParseError(v.line, v.column, "[network] edge index must be an integer in " + key);
                }
                edges[*n] = &v;
            } else {
                throw ParseError(v.line, v.column, "[network] unknown key " + key);
            }
        }
        out.duration = positive("duration_s");
        out.dt = positive("dt_s");
        out.rate_start = top_number("rate_start_s").value_or(0.0);
        if (!(out.rate_start >= 0.0 && out.rate_start < out.duration)) {
            throw InvalidParameter("[network] violated 0 <= rate_start_s < duration_s");
        }
        if (neurons_.empty()) {
            throw ParseError(raw_.line, 1, "[network] declares no neurons (neuron.<id>.cm=...)");
        }

        for (auto& [id, fields] : neurons_) {
            out.spec.neurons.push_back(neuron(id, fields));
        }
        for (const auto& [n, v] : edges) {
            out.spec.edges.push_back(edge(*v, "edge." + std::to_string(n)));
        }
        for (auto& [id, fields] : stims_) {
            out.spec.stimuli.push_back(stimulus(id, fields, out.duration));
        }
        validated("network", [&] {
            out.spec.validate();
            return 0;
        });
        return out;
    }

private:
    static std::vector<std::string> split(std::string_view s, char sep) {
        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            const auto pos = s.find(sep, start);
            parts.emplace_back(s.substr(start, pos - start));
            if (pos == std::string_view::npos) {
                break;
            }
            start = pos + 1;
        }
        return parts;
    }

    std::optional<double> top_number(const std::string& key) {
        const auto it = raw_.keys.find(key);
        if (it == raw_.keys.end()) {
            return std::nullopt;
        }
        const auto d = to_double(it->second.text);
        if (!d) {
            throw ParseError(it->second.line, value_column(it->second, key),
                             "[network] " + key + ": expected a number, got '" + it->second.text + "'");
        }
        return d;
    }

    double positive(const std::string& key) {
        const auto d = top_number(key);
        if (!d) {
            throw ParseError(raw_.line, 1, "[network] missing required key " + key);
        }
        if (!(*d > 0.0)) {
            throw InvalidParameter("[network] violated " + key + " > 0");
        }
        return *d;
    }

    static double field_number(Fields& f, const std::string& prefix, const std::string& field,
                               std::optional<double> fallback) {
        const RawValue* v = f.get(field);
        if (v == nullptr) {
            if (!fallback) {
                throw InvalidParameter("[network] missing required key " + prefix + field);
            }
            return *fallback;
        }
        const auto d = to_double(v->text);
        if (!d) {
            throw ParseError(v->line, value_column(*v, prefix + field),
                             "[network] " + prefix + field + ": expected a number, got '" + v->text + "'");
        }
        return *d;
    }

    static void reject_unused(const Fields& f, const std::string& prefix) {
        for (const auto& [field, v] : f.values) {
            if (!f.used.contains(field)) {
                throw ParseError(v->line, v->column, "[network] unknown key " + prefix + field);
            }
        }
    }

    static ResistanceClamp clamp_of(Fields& f, const std::string& prefix) {
        ResistanceClamp c{field_number(f, prefix, "r_min_ohm", 0.0), field_number(f, prefix, "r_max_ohm", 300.0)};
        validated("network", [&] {
            c.validate();
            return 0;
        });
        return c;
    }

    NeuronSpec neuron(const std::string& id, Fields& f) {
        const std::string prefix = "neuron." + id + ".";
        const RawValue* kind = f.get("cm");
        if (kind == nullptr) {
            throw InvalidParameter("[network] missing required key " + prefix + "cm");
        }
        const std::string k = lower(kind->text);

        ConversionParams cm;
        if (k == "counter") {
            CounterParams p;
            p.window = field_number(f, prefix, "window_s", 0.01);
            p.count_to_r.r0 = field_number(f, prefix, "r0_ohm", 0.0);
            p.count_to_r.slope = field_number(f, prefix, "slope_ohm_per_count", 10.0);
            p.count_to_r.clamp = clamp_of(f, prefix);
            cm = p;
        } else if (k == "integrator") {
            IntegratorParams p;
            p.c_s = field_number(f, prefix, "c_s_f", 1e-6);
            p.r_s = field_number(f, prefix, "r_s_ohm", 1e5);
            p.q_spike = field_number(f, prefix, "q_spike_c", 1e-8);
            p.v_to_r.r0 = field_number(f, prefix, "r0_ohm", 0.0);
            p.v_to_r.slope = field_number(f, prefix, "slope_ohm_per_v", 300.0);
            p.v_to_r.clamp = clamp_of(f, prefix);
            cm = p;
        } else if (k == "thermal") {
            ThermalParams p;
            p.heat_per_spike = field_number(f, prefix, "heat_per_spike_j", 1e-5);
            p.thermal_capacity = field_number(f, prefix, "thermal_capacity_j_per_k", 1e-4);
            p.cooling_rate = field_number(f, prefix, "cooling_rate_per_s", 10.0);
            p.ambient = field_number(f, prefix, "ambient_k", 300.0);
            p.temp_to_r.r_ref = field_number(f, prefix, "r_ref_ohm", 50.0);
            p.temp_to_r.tcr = field_number(f, prefix, "tcr_per_k", 0.1);
            p.temp_to_r.t_ref = field_number(f, prefix, "t_ref_k", 300.0);
            p.temp_to_r.clamp = clamp_of(f, prefix);
            cm = p;
        } else {
            throw ParseError(kind->line, value_column(*kind, prefix + "cm"),
                             "[network] " + prefix + "cm: expected counter|integrator|thermal, got '" + kind->text + "'");
        }

        if (!sw_) {
            throw InvalidParameter("[network] neurons need a [switch] section");
        }
        // Per-neuron overrides of the [circuit] values.
        const auto inherit = [&](const char* field, double base) {
            return circuit_ ? field_number(f, prefix, field, base) : field_number(f, prefix, field, std::nullopt);
        };
        const double n_i0 = inherit("i0_a", circuit_ ? circuit_->i0() : 0.0);
        const double n_c1 = inherit("c1_f", circuit_ ? circuit_->c1() : 0.0);
        const double n_c2 = inherit("c2_f", circuit_ ? circuit_->c2() : 0.0);
        reject_unused(f, prefix);

        CircuitParams circuit = validated("network", [&] {
            const double r_floor = ConversionModule(cm).clamp().r_min;
            return CircuitParams::create(*sw_, n_i0, n_c1, n_c2, r_floor);
        });
        return NeuronSpec{id, circuit, cm};
    }

    static EdgeSpec edge(const RawValue& v, const std::string& key) {
        const auto parts = split(v.text, ':');
        const auto sign = parts.size() == 3 ? to_integer(parts[2]) : std::nullopt;
        if (parts.size() != 3 || parts[0].empty() || parts[1].empty() || !sign || (*sign != 1 && *sign != -1)) {
            throw ParseError(v.line, value_column(v, key),
                             "[network] " + key + ": expected <src>:<dst>:<+1|-1>, got '" + v.text + "'");
        }
        return EdgeSpec{parts[0], parts[1], static_cast<int>(*sign)};
    }

    StimulusSpec stimulus(const std::string& id, Fields& f, double duration) {
        const std::string prefix = "stim." + id + ".";
        StimulusSpec s;
        s.target = id;
        const RawValue* receptor = f.get("receptor");
        if (receptor != nullptr) {
            const std::string k = lower(receptor->text);
            ReceptorInput in;
            if (k == "linear") {
                in.map.kind = LinearReceptor{field_number(f, prefix, "r_base_ohm", 0.0),
                                             field_number(f, prefix, "gain_ohm_per_unit", 1.0)};
            } else if (k == "tcr") {
                in.map.kind = TcrReceptor{field_number(f, prefix, "r_ref_ohm", 50.0),
                                          field_number(f, prefix, "tcr_per_k", 0.1),
                                          field_number(f, prefix, "t_ref_k", 300.0)};
            } else {
                throw ParseError(receptor->line, value_column(*receptor, prefix + "receptor"),
                                 "[network] " + prefix + "receptor: expected linear|tcr, got '" + receptor->text + "'");
            }
            in.map.clamp = clamp_of(f, prefix);
            const double s0 = field_number(f, prefix, "stimulus_start", 0.0);
            const double s1 = field_number(f, prefix, "stimulus_end", s0);
            in.stimulus = [s0, s1, duration](double t) { return s0 + (s1 - s0) * std::min(t / duration, 1.0); };
            validated("network", [&] {
                in.map.validate();
                return 0;
            });
            reject_unused(f, prefix);
            s.input = std::move(in);
            return s;
        }

        SpikeInput in;
        in.sign = static_cast<int>(field_number(f, prefix, "sign", 1.0));
        const RawValue* rate = f.get("rate_hz");
        const RawValue* file = f.get("file");
        if ((rate == nullptr) == (file == nullptr)) {
            throw InvalidParameter("[network] " + prefix + "* needs exactly one of rate_hz, file or receptor");
        }
        if (rate != nullptr) {
            const auto hz = to_double(rate->text);
            if (!hz || *hz < 0.0) {
                throw ParseError(rate->line, value_column(*rate, prefix + "rate_hz"),
                                 "[network] " + prefix + "rate_hz: expected a rate >= 0, got '" + rate->text + "'");
            }
            in.times = regular_spike_times(*hz, duration);
        } else {
            in.times = load_spike_file(base_dir_ / file->text);
        }
        reject_unused(f, prefix);
        s.input = std::move(in);
        return s;
    }

    const RawSection& raw_;
    const std::optional<SwitchParams>& sw_;
    const std::optional<CircuitParams>& circuit_;
    std::filesystem::path base_dir_;
    std::map<std::string, Fields> neurons_;
    std::map<std::string, Fields> stims_;
};

const std::set<std::string> kSections = {"switch", "circuit", "sweep", "rcf", "simulate",
                                         "ramp",   "fit",     "iv",    "network"};

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
    static const std::map<std::string, Command> names = {
        {"iv", Command::Iv},     {"simulate", Command::Simulate}, {"sweep", Command::Sweep},
        {"rcf", Command::Rcf},   {"fit", Command::Fit},           {"ramp", Command::Ramp},
        {"network", Command::Network}, {"jump", Command::Jump},
    };
    const auto it = names.find(lower(name));
    if (it == names.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::string_view to_string(Command c) noexcept {
    switch (c) {
        case Command::Iv: return "iv";
        case Command::Simulate: return "simulate";
        case Command::Sweep: return "sweep";
        case Command::Rcf: return "rcf";
        case Command::Fit: return "fit";
        case Command::Ramp: return "ramp";
        case Command::Network: return "network";
        case Command::Jump: return "jump";
    }
    return "?";
}

namespace {
std::string located(std::size_t line, std::size_t column, const std::string& message) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}
}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error(located(line, column, message)), line_(line), column_(column) {}

std::map<std::string, RawSection> parse_ini(std::string_view text) {
    std::map<std::string, RawSection> sections;
    RawSection* current = nullptr;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        ++line_no;
        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }

        std::size_t i = 0;
        while (i < line.size()) {
            if (is_space(line[i])) {
                ++i;
                continue;
            }
            const std::size_t column = i + 1;
            if (line[i] == '[') {
                const auto close = line.find(']', i);
                if (close == std::string_view::npos) {
                    throw ParseError(line_no, column, "unterminated section header");
                }
                const std::string name = lower(line.substr(i + 1, close - i - 1));
                if (!kSections.contains(name)) {
                    throw ParseError(line_no, column, "unknown section [" + name + "]");
                }
                if (sections.contains(name)) {
                    throw ParseError(line_no, column, "duplicate section [" + name + "]");
                }
                current = &sections[name];
                current->line = line_no;
                i = close + 1;
                continue;
            }
            std::size_t end = i;
            while (end < line.size() && !is_space(line[end])) {
                ++end;
            }
            const std::string_view token = line.substr(i, end - i);
            const auto eq = token.find('=');
            if (eq == std::string_view::npos || eq == 0) {
                throw ParseError(line_no, column, "expected key=value, got '" + std::string(token) + "'");
            }
            if (current == nullptr) {
                throw ParseError(line_no, column, "key outside of any section");
            }
            const std::string key(token.substr(0, eq));
            if (current->keys.contains(key)) {
                throw ParseError(line_no, column, "duplicate key " + key);
            }
            current->keys[key] = RawValue{std::string(token.substr(eq + 1)), line_no, column};
            i = end;
        }
        pos = eol + 1;
    }
    return sections;
}

std::vector<double> SweepSection::grid() const {
    if (scale == GridScale::Linear) {
        return linear_grid(r_min, r_max, points);
    }
    std::vector<double> g(points);
    const double ratio = std::log(r_max / r_min);
    for (std::size_t i = 0; i < points; ++i) {
        g[i] = r_min * std::exp(ratio * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    g.front() = r_min;
    g.back() = r_max;
    return g;
}

ExperimentSpec parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    const auto raw = parse_ini(text);
    const auto section = [&](const std::string& name) -> const RawSection* {
        const auto it = raw.find(name);
        return it == raw.end() ? nullptr : &it->second;
    };

    ExperimentSpec spec;

    SectionReader sw("switch", section("switch"));
    if (sw.present()) {
        const double u_th = sw.required_number("u_th_v");
        const double u_h = sw.required_number("u_h_v");
        const double r_on = sw.required_number("r_on_ohm");
        const double r_off = sw.required_number("r_off_ohm");
        sw.reject_unknown();
        spec.switch_params = validated("switch", [&] { return SwitchParams::create(u_th, u_h, r_on, r_off); });
    }

    SectionReader circuit("circuit", section("circuit"));
    if (circuit.present()) {
        const double i0 = circuit.required_number("i0_a");
        const double c1 = circuit.required_number("c1_f");
        const double c2 = circuit.required_number("c2_f");
        const double r = circuit.required_number("r_ohm");
        circuit.reject_unknown();
        if (!spec.switch_params) {
            throw ParseError(section("circuit")->line, 1, "[circuit] requires a [switch] section");
        }
        spec.circuit = validated("circuit", [&] { return CircuitParams::create(*spec.switch_params, i0, c1, c2, r); });
    }

    SectionReader sweep("sweep", section("sweep"));
    if (sweep.present()) {
        spec.sweep.r_min = sweep.number("r_min_ohm").value_or(spec.sweep.r_min);
        spec.sweep.r_max = sweep.number("r_max_ohm").value_or(spec.sweep.r_max);
        spec.sweep.points = sweep.count("points").value_or(spec.sweep.points);
        if (const auto s = sweep.choice("scale", {"linear", "log"})) {
            spec.sweep.scale = *s == "log" ? GridScale::Log : GridScale::Linear;
        }
        sweep.reject_unknown();
    }
    if (!(spec.sweep.r_min >= 0.0 && spec.sweep.r_min < spec.sweep.r_max)) {
        throw InvalidParameter("[sweep] violated 0 <= r_min_ohm < r_max_ohm");
    }
    if (spec.sweep.points < 2) {
        throw InvalidParameter("[sweep] violated points >= 2");
    }
    if (spec.sweep.scale == GridScale::Log && !(spec.sweep.r_min > 0.0)) {
        throw InvalidParameter("[sweep] violated r_min_ohm > 0 for scale=log");
    }

    SectionReader rcf("rcf", section("rcf"));
    spec.rcf.dr = rcf.number("dr_ohm").value_or(spec.rcf.dr);
    rcf.reject_unknown();
    if (!(spec.rcf.dr > 0.0)) {
        throw InvalidParameter("[rcf] violated dr_ohm > 0");
    }

    SectionReader sim("simulate", section("simulate"));
    if (sim.present()) {
        SimulateSection s;
        s.t_end = sim.required_number("t_end_s");
        s.dt = sim.required_number("dt_s");
        if (const auto e = sim.choice("engine", {"analytic", "numeric"})) {
            s.engine = *e == "numeric" ? Engine::Numeric : Engine::Analytic;
        }
        sim.reject_unknown();
        if (!(s.t_end > 0.0) || !(s.dt > 0.0)) {
            throw InvalidParameter("[simulate] violated t_end_s > 0 and dt_s > 0");
        }
        spec.simulate = s;
    }

    SectionReader ramp("ramp", section("ramp"));
    spec.ramp.r_start = ramp.number("r_start_ohm").value_or(spec.ramp.r_start);
    spec.ramp.r_end = ramp.number("r_end_ohm").value_or(spec.ramp.r_end);
    spec.ramp.t_end = ramp.number("t_end_s").value_or(spec.ramp.t_end);
    spec.ramp.dt = ramp.number("dt_s").value_or(spec.ramp.dt);
    ramp.reject_unknown();
    if (!(spec.ramp.r_start >= 0.0) || !(spec.ramp.r_end >= 0.0)) {
        throw InvalidParameter("[ramp] violated r_start_ohm >= 0 and r_end_ohm >= 0");
    }
    if (!(spec.ramp.t_end > 0.0) || !(spec.ramp.dt >= 0.0)) {
        throw InvalidParameter("[ramp] violated t_end_s > 0 and dt_s >= 0");
    }

    SectionReader fit("fit", section("fit"));
    spec.fit.max_iter = fit.count("max_iter").value_or(spec.fit.max_iter);
    spec.fit.tol = fit.number("tol").value_or(spec.fit.tol);
    fit.reject_unknown();
    if (spec.fit.max_iter == 0 || !(spec.fit.tol > 0.0)) {
        throw InvalidParameter("[fit] violated max_iter >= 1 and tol > 0");
    }

    SectionReader iv("iv", section("iv"));
    spec.iv.u_min = iv.number("u_min_v").value_or(spec.iv.u_min);
    spec.iv.u_max = iv.number("u_max_v").value_or(spec.iv.u_max);
    spec.iv.points = iv.count("points").value_or(spec.iv.points);
    iv.reject_unknown();
    if (spec.iv.points < 2) {
        throw InvalidParameter("[iv] violated points >= 2");
    }
    if (iv.find("u_max_v") != nullptr && !(spec.iv.u_min < spec.iv.u_max)) {
        throw InvalidParameter("[iv] violated u_min_v < u_max_v");
    }

    if (const RawSection* net = section("network")) {
        spec.network = NetworkParser(*net, spec.switch_params, spec.circuit, base_dir).parse();
    }
    return spec;
}

void require_sections(const ExperimentSpec& spec) {
    const auto need = [&](bool ok, const char* what) {
        if (!ok) {
            throw InvalidParameter(std::string(to_string(spec.command)) + " needs a " + what + " section");
        }
    };
    switch (spec.command) {
        case Command::Iv:
            need(spec.switch_params.has_value(), "[switch]");
            break;
        case Command::Simulate:
            need(spec.circuit.has_value(), "[circuit]");
            need(spec.simulate.has_value(), "[simulate]");
            break;
        case Command::Sweep:
        case Command::Rcf:
        case Command::Fit:
        case Command::Ramp:
        case Command::Jump:
            need(spec.circuit.has_value(), "[circuit]");
            break;
        case Command::Network:
            need(spec.network.has_value(), "[network]");
            break;
    }
}

}  // namespace relaxosc::cli
