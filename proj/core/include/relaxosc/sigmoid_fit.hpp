#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "relaxosc/characterization.hpp"

namespace relaxosc {

/// Sigmoid-like activation
///   F(R) = a1 (1 - e^{-a3 R}) / (1 + e^{-a2 (R - a4)}) + a5
/// a logistic step of width ~1/a2 centred at a4, scaled by a saturating
/// growth term with knee ~1/a3, on top of the floor a5.
struct SigmoidCoefficients {
    double a1 = 0.0;  // Hz
    double a2 = 0.0;  // 1/ohm
    double a3 = 0.0;  // 1/ohm
    double a4 = 0.0;  // ohm
    double a5 = 0.0;  // Hz

    double operator()(double r) const noexcept;
    /// Partial derivatives with respect to (a1, a2, a3, a4, a5).
    std::array<double, 5> gradient(double r) const noexcept;

    std::array<double, 5> as_array() const noexcept { return {a1, a2, a3, a4, a5}; }
    static SigmoidCoefficients from_array(const std::array<double, 5>& a) noexcept {
        return {a[0], a[1], a[2], a[3], a[4]};
    }
};

struct SigmoidFit {
    SigmoidCoefficients coefficients;
    /// sqrt(mean(residual^2)) / mean(f).
    double rmse_rel = 0.0;
    /// max |residual| / mean(f), same normalization as rmse_rel.
    double max_rel_error = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

struct FitOptions {
    std::size_t max_iter = 200;
    double tol = 1e-8;
};

/// Starting point derived from the data: floor, span, steepest point and
/// saturation knee of the curve.
SigmoidCoefficients initial_guess(std::span<const double> r, std::span<const double> f);

/// Damped Gauss-Newton (Levenberg-Marquardt with Marquardt scaling) on the
/// sum of squared residuals. Needs at least 20 points. A flat curve returns
/// converged = false with a1 = 0 instead of iterating.
SigmoidFit fit_sigmoid(std::span<const double> r, std::span<const double> f, const FitOptions& options = {});

/// Fits the successful rows of a sweep.
SigmoidFit fit_sigmoid(const SweepResult& sweep, const FitOptions& options = {});

}  // namespace relaxosc
