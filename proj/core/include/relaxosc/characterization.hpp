#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relaxosc/circuit_params.hpp"

namespace relaxosc {

/// Closed-form frequency of the single-capacitor oscillator (switch shunted
/// by c0 only):
///   T_off = r_off c0 ln((i0 r_off - u_h) / (i0 r_off - u_th))
///   T_on  = r_on  c0 ln((u_th - i0 r_on) / (u_h - i0 r_on))
/// Throws DomainError unless i0 r_off > u_th and i0 r_on < u_h.
double single_cap_frequency(const SwitchParams& p, double i0, double c0);

struct SweepRow {
    double r = 0.0;
    double f = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    /// Set when the limit cycle failed at this point; f/t1/t2 are then 0.
    std::optional<std::string> error;

    bool ok() const noexcept { return !error.has_value(); }
};

struct SweepResult {
    CircuitParams base;
    std::vector<SweepRow> rows;

    std::size_t failures() const noexcept;
    /// Successful rows only, in grid order.
    std::vector<SweepRow> successful() const;
};

/// F(R) over `grid` (nonempty, strictly increasing, values >= 0). Per-point
/// failures are recorded in the row instead of aborting the sweep.
SweepResult sweep_f_of_r(const CircuitParams& base, std::span<const double> grid);

/// Linear grid of `points` values from r_min to r_max inclusive.
std::vector<double> linear_grid(double r_min, double r_max, std::size_t points);

struct RcfRow {
    double r;
    double rcf;
};

struct RcfResult {
    std::vector<RcfRow> rows;

    /// Row with the largest RCF. Requires a nonempty result.
    const RcfRow& peak() const;
};

/// Resistive coefficient of frequency (1/F) dF/dR by central differences of
/// half-width dr; forward difference where r < dr.
RcfResult rcf_curve(const CircuitParams& base, std::span<const double> grid, double dr = 0.5);

/// F(r -> inf) / F(0) from the two single-capacitor limits (series
/// capacitance vs. c2 alone).
double frequency_jump(const CircuitParams& base);

}  // namespace relaxosc
