#include "relaxosc_cli/experiment.hpp"

#include <algorithm>
#include <sstream>

#include "relaxosc/analytic_engine.hpp"
#include "relaxosc/characterization.hpp"
#include "relaxosc/numeric_oracle.hpp"
#include "relaxosc/rate_network.hpp"
#include "relaxosc/sigmoid_fit.hpp"

namespace relaxosc::cli {
namespace {

Table waveform_table(const Waveform& w) {
    Table t{{"t_s", "u1_v", "u2_v", "usw_v", "isw_a", "state"}, {}};
    t.rows.reserve(w.samples.size());
    for (const WaveformSample& s : w.samples) {
        t.rows.push_back({s.t, s.u1, s.u2, s.usw, s.isw, std::string(to_string(s.state))});
    }
    return t;
}

Table spike_table(const SpikeTrain& train) {
    Table t{{"t_s"}, {}};
    for (double ts : train.times) {
        t.rows.push_back({ts});
    }
    return t;
}

// Instantaneous frequency 1/ISI plotted at the later spike.
Plot rate_plot(const SpikeTrain& train, std::string title) {
    Plot p;
    p.title = std::move(title);
    p.x_label = "t (s)";
    p.y_label = "1/ISI (Hz)";
    for (std::size_t i = 1; i < train.times.size(); ++i) {
        p.x.push_back(train.times[i]);
        p.y.push_back(1.0 / (train.times[i] - train.times[i - 1]));
    }
    return p;
}

Artifact run_iv(const ExperimentSpec& spec) {
    const SwitchParams& sw = *spec.switch_params;
    const double u_max = spec.iv.u_max > 0.0 ? spec.iv.u_max : 1.5 * sw.u_th();
    Artifact a;
    a.table.columns = {"u_v", "i_off_a", "i_on_a"};
    a.plot = {{}, {}, "S-switch I-V (OFF branch)", "u (V)", "i (A)", false};
    for (std::size_t k = 0; k < spec.iv.points; ++k) {
        const double u = spec.iv.u_min + (u_max - spec.iv.u_min) * static_cast<double>(k) /
                                             static_cast<double>(spec.iv.points - 1);
        const double off = iv_current(u, SwitchState::Off, sw);
        a.table.rows.push_back({u, off, iv_current(u, SwitchState::On, sw)});
        a.plot.x.push_back(u);
        a.plot.y.push_back(off);
    }
    return a;
}

Artifact run_simulate(const ExperimentSpec& spec) {
    const CircuitParams& c = *spec.circuit;
    const SimulateSection& s = *spec.simulate;
    const Waveform w = s.engine == Engine::Analytic ? sample_waveform(c, s.t_end, s.dt)
                                                    : integrate(c, s.t_end, s.dt).waveform;
    Artifact a;
    a.table = waveform_table(w);
    a.plot = {{}, {}, "Switch voltage", "t (s)", "usw (V)", false};
    for (const WaveformSample& x : w.samples) {
        a.plot.x.push_back(x.t);
        a.plot.y.push_back(x.usw);
    }
    return a;
}

std::vector<SweepRow> checked_rows(const SweepResult& sweep, std::vector<std::string>& warnings) {
    for (const SweepRow& row : sweep.rows) {
        if (!row.ok()) {
            warnings.push_back("sweep point r = " + format_number(row.r) + " ohm skipped: " + *row.error);
        }
    }
    return sweep.successful();
}

Artifact run_sweep(const ExperimentSpec& spec) {
    const auto grid = spec.sweep.grid();
    const SweepResult sweep = sweep_f_of_r(*spec.circuit, grid);
    Artifact a;
    a.table.columns = {"r_ohm", "f_hz", "t1_s", "t2_s"};
    a.plot = {{}, {}, "F(R)", "R (ohm)", "F (Hz)", false};
    for (const SweepRow& row : checked_rows(sweep, a.warnings)) {
        a.table.rows.push_back({row.r, row.f, row.t1, row.t2});
        a.plot.x.push_back(row.r);
        a.plot.y.push_back(row.f);
    }
    return a;
}

Artifact run_rcf(const ExperimentSpec& spec) {
    const auto grid = spec.sweep.grid();
    const RcfResult rcf = rcf_curve(*spec.circuit, grid, spec.rcf.dr);
    Artifact a;
    a.table.columns = {"r_ohm", "rcf_per_ohm"};
    a.plot = {{}, {}, "RCF(R)", "R (ohm)", "RCF (1/ohm)", false};
    for (const RcfRow& row : rcf.rows) {
        a.table.rows.push_back({row.r, row.rcf});
        a.plot.x.push_back(row.r);
        a.plot.y.push_back(row.rcf);
    }
    return a;
}

Artifact run_fit(const ExperimentSpec& spec) {
    const auto grid = spec.sweep.grid();
    const SweepResult sweep = sweep_f_of_r(*spec.circuit, grid);
    Artifact a;
    const auto rows = checked_rows(sweep, a.warnings);
    const SigmoidFit fit = fit_sigmoid(sweep, spec.fit);
    const SigmoidCoefficients& k = fit.coefficients;
    a.table.columns = {"a1_hz", "a2_per_ohm", "a3_per_ohm", "a4_ohm", "a5_hz", "rmse_rel", "converged"};
    a.table.rows.push_back({k.a1, k.a2, k.a3, k.a4, k.a5, fit.rmse_rel, fit.converged});
    a.single_record = true;
    a.default_format = Format::Json;
    a.plot = {{}, {}, "Sigmoid fit of F(R)", "R (ohm)", "F (Hz)", false};
    for (const SweepRow& row : rows) {
        a.plot.x.push_back(row.r);
        a.plot.y.push_back(k(row.r));
    }
    return a;
}

Artifact run_ramp(const ExperimentSpec& spec) {
    const CircuitParams& c = *spec.circuit;
    const RampSection& r = spec.ramp;
    IntegrationOptions opt;
    opt.t_end = r.t_end;
    opt.dt = r.dt > 0.0 ? r.dt : kDefaultStepFraction / fastest_rate(c, std::max(r.r_start, r.r_end));
    opt.record_waveform = false;
    opt.r_of_t = [r](double t) { return r.r_start + (r.r_end - r.r_start) * std::min(t / r.t_end, 1.0); };
    const IntegrationResult res = integrate(c, opt);
    Artifact a;
    a.table = spike_table(res.spikes);
    a.plot = rate_plot(res.spikes, "Spike rate under an R ramp");
    return a;
}

Artifact run_network(const ExperimentSpec& spec) {
    const NetworkSection& net = *spec.network;
    const NetworkResult res = simulate_network(net.spec, net.duration, net.dt);
    Artifact a;
    a.table.columns = {"id", "spikes", "rate_hz"};
    for (std::size_t i = 0; i < res.ids.size(); ++i) {
        const SpikeTrain& train = res.trains[i];
        a.table.rows.push_back({res.ids[i], static_cast<double>(train.size()),
                                output_rate(train, net.rate_start, net.duration)});
        a.extras.emplace_back(res.ids[i], spike_table(train));
    }
    if (!res.ids.empty()) {
        a.plot = rate_plot(res.trains.front(), "Spike rate of " + res.ids.front());
    }
    return a;
}

Artifact run_jump(const ExperimentSpec& spec) {
    const CircuitParams& c = *spec.circuit;
    const double f0 = single_cap_frequency(c.switch_params(), c.i0(), c.c2());
    const double f_inf = single_cap_frequency(c.switch_params(), c.i0(), c.series_capacitance());
    Artifact a;
    a.table.columns = {"c1_f", "c2_f", "f_zero_hz", "f_inf_hz", "jump"};
    a.table.rows.push_back({c.c1(), c.c2(), f0, f_inf, frequency_jump(c)});
    a.single_record = true;
    a.default_format = Format::Json;
    return a;
}

std::string render_table(const Table& t, bool single_record, Format f) {
    std::ostringstream os;
    if (f == Format::Csv) {
        write_csv(os, t);
    } else {
        os << (single_record ? record_to_json(t) : rows_to_json(t)).dump(2) << '\n';
    }
    return os.str();
}

}  // namespace

Artifact run_experiment(const ExperimentSpec& spec) {
    require_sections(spec);
    switch (spec.command) {
        case Command::Iv: return run_iv(spec);
        case Command::Simulate: return run_simulate(spec);
        case Command::Sweep: return run_sweep(spec);
        case Command::Rcf: return run_rcf(spec);
        case Command::Fit: return run_fit(spec);
        case Command::Ramp: return run_ramp(spec);
        case Command::Network: return run_network(spec);
        case Command::Jump: return run_jump(spec);
    }
    throw InvalidParameter("unknown command");
}

std::string render(const Artifact& a, Format f) { return render_table(a.table, a.single_record, f); }

std::string render_extra(const Table& t, Format f) { return render_table(t, false, f); }

}  // namespace relaxosc::cli
