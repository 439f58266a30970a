#include "relaxosc/characterization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relaxosc/analytic_engine.hpp"
#include "relaxosc/errors.hpp"

namespace relaxosc {
namespace {

void check_grid(std::span<const double> grid) {
    if (grid.empty()) {
        throw InvalidParameter("grid must be nonempty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
            throw InvalidParameter("grid values must be finite and >= 0");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw InvalidParameter("grid must be strictly increasing");
        }
    }
}

double frequency_at(const CircuitParams& base, double r) {
    return limit_cycle(base.with_r(r)).f;
}

}  // namespace

double single_cap_frequency(const SwitchParams& p, double i0, double c0) {
    if (!(c0 > 0.0)) {
        throw DomainError("single_cap_frequency: violated c0 > 0");
    }
    const double v_off = i0 * p.r_off();
    const double v_on = i0 * p.r_on();
    if (!(v_off > p.u_th())) {
        throw DomainError("single_cap_frequency: violated i0 r_off > u_th");
    }
    if (!(v_on < p.u_h())) {
        throw DomainError("single_cap_frequency: violated i0 r_on < u_h");
    }
    const double t_off = p.r_off() * c0 * std::log((v_off - p.u_h()) / (v_off - p.u_th()));
    const double t_on = p.r_on() * c0 * std::log((p.u_th() - v_on) / (p.u_h() - v_on));
    return 1.0 / (t_on + t_off);
}

std::size_t SweepResult::failures() const noexcept {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.ok(); }));
}

std::vector<SweepRow> SweepResult::successful() const {
    std::vector<SweepRow> out;
    std::copy_if(rows.begin(), rows.end(), std::back_inserter(out), [](const SweepRow& r) { return r.ok(); });
    return out;
}

SweepResult sweep_f_of_r(const CircuitParams& base, std::span<const double> grid) {
    check_grid(grid);
    SweepResult result{base, {}};
    result.rows.reserve(grid.size());
    for (double r : grid) {
        SweepRow row;
        row.r = r;
        try {
            const CycleSolution s = limit_cycle(base.with_r(r));
            row.f = s.f;
            row.t1 = s.t1;
            row.t2 = s.t2;
        } catch (const Error& e) {
            row.error = e.what();
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

std::vector<double> linear_grid(double r_min, double r_max, std::size_t points) {
    if (points == 0) {
        throw InvalidParameter("grid: violated points >= 1");
    }
    if (points == 1) {
        return {r_min};
    }
    if (!(r_max > r_min)) {
        throw InvalidParameter("grid: violated r_min < r_max");
    }
    std::vector<double> grid(points);
    const double step = (r_max - r_min) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = r_min + step * static_cast<double>(i);
    }
    grid.back() = r_max;
    return grid;
}

const RcfRow& RcfResult::peak() const {
    if (rows.empty()) {
        throw InvalidParameter("RCF curve is empty");
    }
    return *std::max_element(rows.begin(), rows.end(), [](const RcfRow& a, const RcfRow& b) { return a.rcf < b.rcf; });
}

RcfResult rcf_curve(const CircuitParams& base, std::span<const double> grid, double dr) {
    check_grid(grid);
    if (!(dr > 0.0)) {
        throw InvalidParameter("rcf: violated dr > 0");
    }
    RcfResult out;
    out.rows.reserve(grid.size());
    for (double r : grid) {
        const double f = frequency_at(base, r);
        double rcf = 0.0;
        if (r < dr) {
            rcf = (frequency_at(base, r + dr) - f) / (dr * f);
        } else {
            rcf = (frequency_at(base, r + dr) - frequency_at(base, r - dr)) / (2.0 * dr * f);
        }
        out.rows.push_back({r, rcf});
    }
    return out;
}

double frequency_jump(const CircuitParams& base) {
    const SwitchParams& sw = base.switch_params();
    return single_cap_frequency(sw, base.i0(), base.series_capacitance()) /
           single_cap_frequency(sw, base.i0(), base.c2());
}

}  // namespace relaxosc
