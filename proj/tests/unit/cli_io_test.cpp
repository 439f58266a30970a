#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>
#include <string>

#include "relaxosc_cli/config.hpp"
#include "relaxosc_cli/experiment.hpp"
#include "relaxosc_cli/output.hpp"

namespace relaxosc::cli {
namespace {

const std::string kFig5 =
    "# Fig. 5 parameters\n"
    "[switch]  u_th_v=4.0  u_h_v=2.0  r_on_ohm=200  r_off_ohm=40000\n"
    "[circuit] i0_a=150e-6 c1_f=10e-9 c2_f=1e-6 r_ohm=100\n"
    "[sweep]   r_min_ohm=0 r_max_ohm=300 points=301\n";

ExperimentSpec spec_for(Command cmd, const std::string& text = kFig5) {
    ExperimentSpec s = parse_config(text);
    s.command = cmd;
    return s;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    s.replace(s.find(from), from.size(), to);
    return s;
}

TEST(Config, CommandNamesAreCaseInsensitive) {
    EXPECT_EQ(parse_command("SWEEP"), Command::Sweep);
    EXPECT_EQ(parse_command("rcf"), Command::Rcf);
    EXPECT_FALSE(parse_command("bogus").has_value());
}

TEST(Config, SweepGridHas301Points) {
    const ExperimentSpec s = parse_config(kFig5);
    const auto g = s.sweep.grid();
    ASSERT_EQ(g.size(), 301u);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_EQ(g.back(), 300.0);
}

TEST(Config, DefaultsWhenSectionsAreAbsent) {
    const ExperimentSpec s = parse_config("[switch] u_th_v=4 u_h_v=2 r_on_ohm=200 r_off_ohm=40000\n");
    EXPECT_FALSE(s.circuit.has_value());
    EXPECT_EQ(s.sweep.points, 301u);
    EXPECT_EQ(s.rcf.dr, 0.5);
}

TEST(Config, HoldingAboveThresholdNamesInvariant) {
    try {
        parse_config(replace(kFig5, "u_h_v=2.0", "u_h_v=5.0"));
        FAIL() << "expected InvalidParameter";
    } catch (const InvalidParameter& e) {
        EXPECT_NE(std::string(e.what()).find("u_h < u_th"), std::string::npos) << e.what();
    }
}

TEST(Config, CurrentOutsideNdrWindowIsRejected) {
    try {
        parse_config(replace(kFig5, "i0_a=150e-6", "i0_a=1e-6"));
        FAIL() << "expected InvalidParameter";
    } catch (const InvalidParameter& e) {
        EXPECT_NE(std::string(e.what()).find("NDR window"), std::string::npos) << e.what();
    }
}

TEST(Config, UnknownKeyReportsLineAndColumn) {
    try {
        parse_config(replace(kFig5, "points=301", "pts=301"));
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_EQ(e.column(), 37u);
        EXPECT_NE(std::string(e.what()).find("line 4, column 37"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("pts"), std::string::npos);
    }
}

TEST(Config, SyntaxErrors) {
    EXPECT_THROW(parse_config("[switch\n"), ParseError);
    EXPECT_THROW(parse_config("[nosuch]\n"), ParseError);
    EXPECT_THROW(parse_config("u_th_v=4\n"), ParseError);
    EXPECT_THROW(parse_config("[switch] u_th_v=4 u_th_v=4\n"), ParseError);
    EXPECT_THROW(parse_config(replace(kFig5, "r_on_ohm=200", "r_on_ohm=abc")), ParseError);
}

TEST(Config, MissingSectionForCommand) {
    const ExperimentSpec s = spec_for(Command::Simulate);
    EXPECT_THROW(run_experiment(s), InvalidParameter);
}

TEST(Config, NetworkSection) {
    const std::string text = kFig5 +
                             "[network] duration_s=0.01 dt_s=1e-7\n"
                             "neuron.a.cm=counter neuron.b.cm=integrator neuron.b.r_max_ohm=200\n"
                             "edge.1=a:b:-1\n"
                             "stim.a.rate_hz=1000\n";
    const ExperimentSpec s = parse_config(text);
    ASSERT_TRUE(s.network.has_value());
    const NetworkSpec& net = s.network->spec;
    ASSERT_EQ(net.neurons.size(), 2u);
    ASSERT_EQ(net.edges.size(), 1u);
    EXPECT_EQ(net.edges[0].sign, -1);
    ASSERT_EQ(net.stimuli.size(), 1u);
    EXPECT_EQ(std::get<SpikeInput>(net.stimuli[0].input).times.size(), 10u);
    const auto& b = std::get<IntegratorParams>(net.neurons[net.index_of("b")].cm);
    EXPECT_EQ(b.v_to_r.clamp.r_max, 200.0);
    EXPECT_THROW(parse_config(text + "neuron.a.bogus=1\n"), ParseError);
}

TEST(Output, NumbersRoundTrip) {
    for (double v : {0.1, 1.0 / 3.0, 35.886, 1e-300, 6.02214076e23, -2.5}) {
        const std::string s = format_number(v);
        EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
    }
}

TEST(Output, CsvHeaderAndRows) {
    const Table t{{"a", "b", "c"}, {{1.5, std::string("on"), true}, {2.0, std::string("off"), false}}};
    std::ostringstream os;
    write_csv(os, t);
    EXPECT_EQ(os.str(), "a,b,c\n1.5,on,true\n2,off,false\n");
}

TEST(Experiment, SweepCsvHasOneRowPerGridPoint) {
    const Artifact a = run_experiment(spec_for(Command::Sweep));
    const std::string csv = render(a, Format::Csv);
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "r_ohm,f_hz,t1_s,t2_s");
    std::size_t rows = 0;
    while (std::getline(is, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, 301u);
    EXPECT_TRUE(a.warnings.empty());
}

TEST(Experiment, FitJsonFields) {
    const Artifact a = run_experiment(spec_for(Command::Fit));
    EXPECT_EQ(a.default_format, Format::Json);
    const auto j = nlohmann::json::parse(render(a, Format::Json));
    for (const char* key : {"a1_hz", "a2_per_ohm", "a3_per_ohm", "a4_ohm", "a5_hz", "rmse_rel", "converged"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_LE(j["rmse_rel"].get<double>(), 0.05);
}

TEST(Experiment, JumpRecord) {
    const auto j = nlohmann::json::parse(render(run_experiment(spec_for(Command::Jump)), Format::Json));
    EXPECT_NEAR(j["jump"].get<double>(), 101.0, 1e-9);
}

TEST(Experiment, IdenticalConfigsGiveIdenticalBytes) {
    const std::string text = kFig5 + "[simulate] t_end_s=0.05 dt_s=1e-5 engine=analytic\n";
    for (Command cmd : {Command::Sweep, Command::Rcf, Command::Iv, Command::Simulate}) {
        const Artifact a = run_experiment(spec_for(cmd, text));
        const Artifact b = run_experiment(spec_for(cmd, text));
        EXPECT_EQ(render(a, Format::Csv), render(b, Format::Csv));
        EXPECT_EQ(render(a, Format::Json), render(b, Format::Json));
        EXPECT_EQ(render_svg(a.plot), render_svg(b.plot));
    }
}

TEST(Svg, IsWellFormedAndDecimated) {
    Plot p;
    for (int i = 0; i < 10000; ++i) {
        p.x.push_back(i);
        p.y.push_back(i * i);
    }
    const std::string svg = render_svg(p, 100);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    const auto start = svg.find("points=\"");
    const auto end = svg.find('"', start + 8);
    const std::string pts = svg.substr(start + 8, end - start - 8);
    EXPECT_EQ(static_cast<std::size_t>(std::count(pts.begin(), pts.end(), ',')), 100u);
}

}  // namespace
}  // namespace relaxosc::cli
