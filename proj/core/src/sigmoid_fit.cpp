#include "relaxosc/sigmoid_fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "relaxosc/errors.hpp"

namespace relaxosc {
namespace {

constexpr std::size_t kParams = 5;
constexpr std::size_t kMinPoints = 20;
constexpr double kMaxDamping = 1e12;

using Vec = std::array<double, kParams>;
using Mat = std::array<Vec, kParams>;

double logistic(double z) noexcept {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// Gaussian elimination with partial pivoting; nullopt when singular.
std::optional<Vec> solve(Mat a, Vec b) {
    for (std::size_t col = 0; col < kParams; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < kParams; ++row) {
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) {
                pivot = row;
            }
        }
        if (!(std::abs(a[pivot][col]) > 0.0) || !std::isfinite(a[pivot][col])) {
            return std::nullopt;
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < kParams; ++row) {
            const double factor = a[row][col] / a[col][col];
            for (std::size_t k = col; k < kParams; ++k) {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    Vec x{};
    for (std::size_t i = kParams; i-- > 0;) {
        double acc = b[i];
        for (std::size_t k = i + 1; k < kParams; ++k) {
            acc -= a[i][k] * x[k];
        }
        x[i] = acc / a[i][i];
        if (!std::isfinite(x[i])) {
            return std::nullopt;
        }
    }
    return x;
}

double cost(const SigmoidCoefficients& c, std::span<const double> r, std::span<const double> f) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double res = c(r[i]) - f[i];
        s += res * res;
    }
    return s;
}

void fill_quality(SigmoidFit& fit, std::span<const double> r, std::span<const double> f) {
    const double mean_f = std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
    double sum_sq = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double res = fit.coefficients(r[i]) - f[i];
        sum_sq += res * res;
        worst = std::max(worst, std::abs(res));
    }
    fit.rmse_rel = std::sqrt(sum_sq / static_cast<double>(f.size())) / mean_f;
    fit.max_rel_error = worst / mean_f;
}

}  // namespace

double SigmoidCoefficients::operator()(double r) const noexcept {
    const double growth = -std::expm1(-a3 * r);
    return a1 * growth * logistic(a2 * (r - a4)) + a5;
}

std::array<double, 5> SigmoidCoefficients::gradient(double r) const noexcept {
    const double decay = std::exp(-a3 * r);
    const double growth = -std::expm1(-a3 * r);
    const double z = a2 * (r - a4);
    const double s = logistic(z);
    const double s_rest = logistic(-z);  // 1 - s without cancellation
    const double ds = s * s_rest;          // ds/dz
    return {
        growth * s,
        a1 * growth * ds * (r - a4),
        a1 * r * decay * s,
        -a1 * growth * ds * a2,
        1.0,
    };
}

SigmoidCoefficients initial_guess(std::span<const double> r, std::span<const double> f) {
    const std::size_t n = r.size();
    SigmoidCoefficients g;
    g.a5 = f.front();
    const double f_max = *std::max_element(f.begin(), f.end());
    g.a1 = f_max - g.a5;

    double best_rcf = 0.0;
    double r_best = r[n / 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double rcf = (f[i + 1] - f[i - 1]) / ((r[i + 1] - r[i - 1]) * f[i]);
        if (rcf > best_rcf) {
            best_rcf = rcf;
            r_best = r[i];
        }
    }
    g.a4 = r_best;
    g.a2 = g.a1 > 0.0 ? 4.0 * best_rcf * (1.0 + g.a5 / g.a1) : 0.0;

    double r_knee = r.back();
    for (std::size_t i = 0; i < n; ++i) {
        if (f[i] >= 0.95 * f_max) {
            r_knee = r[i];
            break;
        }
    }
    if (!(r_knee > 0.0)) {
        r_knee = r.back() > 0.0 ? r.back() : 1.0;
    }
    g.a3 = 1.0 / r_knee;
    return g;
}

SigmoidFit fit_sigmoid(std::span<const double> r, std::span<const double> f, const FitOptions& options) {
    if (r.size() != f.size()) {
        throw InvalidParameter("fit_sigmoid: r and f differ in length");
    }
    if (r.size() < kMinPoints) {
        throw InvalidParameter("fit_sigmoid: violated points >= 20");
    }

    SigmoidFit fit;
    fit.coefficients = initial_guess(r, f);
    if (!(fit.coefficients.a1 > 0.0) || !(fit.coefficients.a2 > 0.0)) {
        // No transition in the data.
        fit.coefficients.a1 = 0.0;
        fill_quality(fit, r, f);
        return fit;
    }

    double current = cost(fit.coefficients, r, f);
    double lambda = 1e-3;
    while (fit.iterations < options.max_iter) {
        ++fit.iterations;

        Mat jtj{};
        Vec jtr{};
        for (std::size_t i = 0; i < r.size(); ++i) {
            const auto grad = fit.coefficients.gradient(r[i]);
            const double res = fit.coefficients(r[i]) - f[i];
            for (std::size_t a = 0; a < kParams; ++a) {
                jtr[a] += grad[a] * res;
                for (std::size_t b = 0; b <= a; ++b) {
                    jtj[a][b] += grad[a] * grad[b];
                }
            }
        }
        for (std::size_t a = 0; a < kParams; ++a) {
            for (std::size_t b = a + 1; b < kParams; ++b) {
                jtj[a][b] = jtj[b][a];
            }
        }

        const Vec params = fit.coefficients.as_array();
        bool accepted = false;
        while (!accepted) {
            Mat damped = jtj;
            Vec rhs{};
            for (std::size_t a = 0; a < kParams; ++a) {
                damped[a][a] += lambda * std::max(jtj[a][a], 1e-300);
                rhs[a] = -jtr[a];
            }
            const auto step = solve(damped, rhs);
            if (step) {
                Vec trial{};
                double rel_change = 0.0;
                for (std::size_t a = 0; a < kParams; ++a) {
                    trial[a] = params[a] + (*step)[a];
                    rel_change = std::max(rel_change, std::abs((*step)[a]) / std::max(std::abs(params[a]), 1e-300));
                }
                const auto candidate = SigmoidCoefficients::from_array(trial);
                const double trial_cost = cost(candidate, r, f);
                if (std::isfinite(trial_cost) && trial_cost <= current) {
                    fit.coefficients = candidate;
                    current = trial_cost;
                    lambda = std::max(lambda * 0.1, 1e-12);
                    accepted = true;
                    if (rel_change < options.tol) {
                        fit.converged = true;
                    }
                } else if (rel_change < options.tol) {
                    // The step has shrunk below resolution without improving.
                    fit.converged = true;
                    break;
                }
            }
            if (!accepted) {
                lambda *= 10.0;
                if (lambda > kMaxDamping) {
                    throw SingularNormalEquations("fit_sigmoid: damping exceeded 1e12 without an acceptable step");
                }
            }
        }
        if (fit.converged) {
            break;
        }
    }
    fill_quality(fit, r, f);
    return fit;
}

SigmoidFit fit_sigmoid(const SweepResult& sweep, const FitOptions& options) {
    std::vector<double> r;
    std::vector<double> f;
    for (const SweepRow& row : sweep.rows) {
        if (row.ok()) {
            r.push_back(row.r);
            f.push_back(row.f);
        }
    }
    return fit_sigmoid(r, f, options);
}

}  // namespace relaxosc
