// quadrature.hpp — Principal-value and oscillatory integrals of spectral weights
//
// The kernels that appear in the second-order propagator elements are
//   sin((w-W)t)/(w-W)^2   (simple pole, principal value),
//   (1-cos((w-W)t))/(w-W)^2  == 2 sin^2((w-W)t/2)/(w-W)^2   (removable peak),
//   cos(w t)/(w^2-W^2) and 1/(w^2-W^2)   (simple pole),
//   J(w)/(w (w+Wrn))   (static shift kernel),
// all integrated over w in [0, omega_max] against a smooth non-negative weight.
//
// Pole treatment: the principal value is taken by folding the integrand
// symmetrically about the pole, [f(W+u) +- f(W-u)], which cancels the odd
// 1/u part exactly and leaves a regular integrand; the leftover one-sided
// stretch is integrated directly.  Oscillatory stretches are summed lobe by
// lobe between consecutive kernel zeros (fixed Gauss panels), stopping once
// the alternating tail is below tolerance.  Smooth stretches go through
// adaptive Gauss-Kronrod.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace chiraldyn::quad {

inline constexpr double default_rel_tol = 1e-6;

struct QuadratureResult {
    double value{0.0};
    double error_estimate{0.0};
    std::size_t subdivisions{0};
    bool converged{true};

    QuadratureResult& operator+=(const QuadratureResult& o) {
        value += o.value;
        error_estimate += o.error_estimate;
        subdivisions += o.subdivisions;
        converged = converged && o.converged;
        return *this;
    }
};

namespace detail {

// (1 - cos x)/x^2 with the removable limit at x = 0.
inline double one_minus_cos_over_x2(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 0.5 * (1.0 - x2 / 12.0 + x2 * x2 / 360.0);
    }
    return (1.0 - std::cos(x)) / (x * x);
}

// sin(x)/x with the removable limit at x = 0.
inline double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

template <class F>
QuadratureResult gk_adaptive(const F& f, double a, double b, double rel_tol) {
    QuadratureResult r;
    if (!(b > a)) return r;
    std::size_t evals = 0;
    auto counted = [&](double x) {
        ++evals;
        return f(x);
    };
    double err = 0.0, l1 = 0.0;
    r.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        counted, a, b, 18, rel_tol, &err, &l1);
    r.error_estimate = err;
    r.subdivisions = evals / 15;
    r.converged = err <= std::max(rel_tol * std::abs(r.value), rel_tol * 1e-3 * l1) ||
                  err <= 1e-14 * std::max(1.0, l1);
    return r;
}

// Sum of zero-to-zero lobes of an oscillatory integrand on [a, b].  Zeros sit
// at z0 + k*half_period.  Stops once several consecutive lobes are negligible
// against the accumulated value (alternating-tail bound goes into the error).
template <class F>
QuadratureResult lobed(const F& f, double a, double b, double z0, double half_period,
                       double rel_tol) {
    using gauss7 = boost::math::quadrature::gauss<double, 7>;
    using gauss15 = boost::math::quadrature::gauss<double, 15>;
    QuadratureResult r;
    if (!(b > a)) return r;

    const std::size_t max_lobes = 4'000'000;
    double k0 = z0 + std::ceil((a - z0) / half_period) * half_period;
    if (k0 <= a + 1e-300) k0 += half_period;

    double lo = a;
    double acc = 0.0, err = 0.0, max_lobe = 0.0, last = 0.0;
    std::size_t n = 0, quiet = 0;
    bool stopped_early = false;

    while (lo < b && n < max_lobes) {
        const double hi = std::min(b, k0 + static_cast<double>(n) * half_period);
        const double lobe = gauss7::integrate(f, lo, hi);
        acc += lobe;
        max_lobe = std::max(max_lobe, std::abs(lobe));
        // spot-check panel accuracy on a sparse subset
        if (n % 16 == 0) {
            const double fine = gauss15::integrate(f, lo, hi);
            err += 17.0 * std::abs(fine - lobe);
            acc += fine - lobe;
        }
        last = lobe;
        ++n;
        lo = hi;

        const double stop = std::max(rel_tol * std::abs(acc), 1e-14 * max_lobe) / 8.0;
        quiet = (std::abs(lobe) <= stop) ? quiet + 1 : 0;
        if (quiet >= 6 && n >= 8) {
            stopped_early = true;
            break;
        }
    }

    r.value = acc;
    r.error_estimate = err + (stopped_early || n >= max_lobes ? std::abs(last) : 0.0);
    r.subdivisions = n;
    r.converged = n < max_lobes;
    return r;
}

// Dispatch between plain adaptive integration and lobe summation by the total
// oscillation phase across the interval.
template <class F>
QuadratureResult oscillatory(const F& f, double a, double b, double freq, double z0,
                             double rel_tol) {
    if (!(b > a)) return {};
    const double phase = freq * (b - a);
    if (!(freq > 0.0) || phase < 24.0 * std::numbers::pi)
        return gk_adaptive(f, a, b, rel_tol);
    return lobed(f, a, b, z0, std::numbers::pi / freq, rel_tol);
}

} // namespace detail

// S(W, t) = int_0^wmax J(w) (1 - cos((w-W)t))/(w-W)^2 dw.
// Peaked at w = W when W > 0; tends to pi t J(W) at large t for W inside the
// support of J.
template <class J>
QuadratureResult sinc_squared_integral(const J& j, double W, double t, double wmax,
                                       double rel_tol = default_rel_tol) {
    if (t < 0.0) throw std::invalid_argument("sinc_squared_integral: t must be >= 0");
    if (t == 0.0 || !(wmax > 0.0)) return {};

    auto f = [&](double w) { return j(w) * t * t * detail::one_minus_cos_over_x2((w - W) * t); };

    const bool pole_inside = W > 0.0 && W < wmax;
    if (!pole_inside || t * wmax < 48.0 * std::numbers::pi) {
        QuadratureResult r;
        if (pole_inside) {
            r += detail::oscillatory(f, 0.0, W, t, W, rel_tol);
            r += detail::oscillatory(f, W, wmax, t, W, rel_tol);
        } else {
            r += detail::oscillatory(f, 0.0, wmax, t, W, rel_tol);
        }
        return r;
    }

    // Wide peak core summed lobe by lobe (kernel zeros at u = 2 pi k / t),
    // smooth 1/u^2 background and alternating cosine part outside it.
    const double core = 24.0 * std::numbers::pi / t;
    const double lo = std::max(0.0, W - core);
    const double hi = std::min(wmax, W + core);

    QuadratureResult r;
    r += detail::lobed(f, lo, W, W, 2.0 * std::numbers::pi / t, rel_tol);
    r += detail::lobed(f, W, hi, W, 2.0 * std::numbers::pi / t, rel_tol);

    auto background = [&](double w) {
        const double u = w - W;
        return j(w) / (u * u);
    };
    auto cosine = [&](double w) {
        const double u = w - W;
        return -j(w) * std::cos(u * t) / (u * u);
    };
    const double hp = std::numbers::pi / t;
    if (lo > 0.0) {
        r += detail::gk_adaptive(background, 0.0, lo, rel_tol);
        r += detail::lobed(cosine, 0.0, lo, W + 0.5 * hp, hp, rel_tol);
    }
    if (hi < wmax) {
        r += detail::gk_adaptive(background, hi, wmax, rel_tol);
        r += detail::lobed(cosine, hi, wmax, W + 0.5 * hp, hp, rel_tol);
    }
    return r;
}

// I(W, t) = P.V. int_0^wmax J(w) sin((w-W)t)/(w-W)^2 dw.
// Ordinary integral when the pole W lies outside (0, wmax).
template <class J>
QuadratureResult sine_over_square_integral(const J& j, double W, double t, double wmax,
                                           double rel_tol = default_rel_tol) {
    if (t < 0.0) throw std::invalid_argument("sine_over_square_integral: t must be >= 0");
    if (t == 0.0 || !(wmax > 0.0)) return {};

    QuadratureResult r;
    auto direct = [&](double w) {
        const double u = w - W;
        return j(w) * std::sin(u * t) / (u * u);
    };

    if (W <= 0.0 || W >= wmax) {
        // no pole in the domain
        return detail::oscillatory(direct, 0.0, wmax, t, W, rel_tol);
    }
    if (std::min(W, wmax - W) < 1e-12 * wmax)
        throw std::domain_error("sine_over_square_integral: pole on the domain boundary");

    const double A = std::min(W, wmax - W);
    auto folded = [&](double u) {
        return (j(W + u) - j(W - u)) * std::sin(u * t) / (u * u);
    };
    r += detail::oscillatory(folded, 0.0, A, t, 0.0, rel_tol);
    if (W <= wmax - W)
        r += detail::oscillatory(direct, 2.0 * W, wmax, t, W, rel_tol);
    else
        r += detail::oscillatory(direct, 0.0, 2.0 * W - wmax, t, W, rel_tol);
    return r;
}

// D(W) = P.V. int_0^wmax J(w) / (w^2 - W^2) dw, pole at W in (0, wmax).
template <class J>
QuadratureResult inverse_quadratic_integral(const J& j, double W, double wmax,
                                            double rel_tol = default_rel_tol) {
    if (!(W > 0.0) || W >= wmax)
        throw std::domain_error("inverse_quadratic_integral: pole must lie inside (0, wmax)");
    const double A = std::min(W, wmax - W);
    auto folded = [&](double u) {
        return (j(W + u) / (u + 2.0 * W) - j(W - u) / (2.0 * W - u)) / u;
    };
    auto direct = [&](double w) { return j(w) / (w * w - W * W); };

    QuadratureResult r;
    r += detail::gk_adaptive(folded, 0.0, A, rel_tol);
    if (W <= wmax - W)
        r += detail::gk_adaptive(direct, 2.0 * W, wmax, rel_tol);
    else
        r += detail::gk_adaptive(direct, 0.0, 2.0 * W - wmax, rel_tol);
    return r;
}

// E(W, t) = P.V. int_0^wmax J(w) cos(w t) / (w^2 - W^2) dw.
template <class J>
QuadratureResult cos_over_quadratic_integral(const J& j, double W, double t, double wmax,
                                             double rel_tol = default_rel_tol) {
    if (!(W > 0.0) || W >= wmax)
        throw std::domain_error("cos_over_quadratic_integral: pole must lie inside (0, wmax)");
    if (t == 0.0) return inverse_quadratic_integral(j, W, wmax, rel_tol);

    const double A = std::min(W, wmax - W);
    auto folded = [&](double u) {
        return (j(W + u) * std::cos((W + u) * t) / (u + 2.0 * W) -
                j(W - u) * std::cos((W - u) * t) / (2.0 * W - u)) / u;
    };
    auto direct = [&](double w) { return j(w) * std::cos(w * t) / (w * w - W * W); };

    const double hp_z0 = std::numbers::pi / (2.0 * t);
    QuadratureResult r;
    r += detail::oscillatory(folded, 0.0, A, t, 0.0, rel_tol);
    if (W <= wmax - W)
        r += detail::oscillatory(direct, 2.0 * W, wmax, t, hp_z0, rel_tol);
    else
        r += detail::oscillatory(direct, 0.0, 2.0 * W - wmax, t, hp_z0, rel_tol);
    return r;
}

// Static shift kernel P.V. int_0^wmax J(w) / (w (w + Wrn)) dw.  The w = 0
// endpoint is integrable for J ~ w^s (s > 0) and is handled by the w = v^2
// substitution; a pole appears inside the domain when Wrn < 0.
template <class J>
QuadratureResult shift_integral(const J& j, double Wrn, double wmax,
                                double rel_tol = default_rel_tol) {
    QuadratureResult r;
    if (!(wmax > 0.0)) return r;

    auto direct = [&](double w) { return j(w) / (w * (w + Wrn)); };
    // transformed near-zero integrand: w = v^2
    auto transformed = [&](double v) { return 2.0 * j(v * v) / (v * (v * v + Wrn)); };

    if (Wrn >= 0.0) {
        const double c = std::min(0.25 * wmax, std::max(Wrn, 1e-3 * wmax));
        r += detail::gk_adaptive(transformed, 0.0, std::sqrt(c), rel_tol);
        r += detail::gk_adaptive(direct, c, wmax, rel_tol);
        return r;
    }

    const double p = -Wrn; // pole position
    if (p < 1e-12 * wmax || std::abs(wmax - p) < 1e-12 * wmax)
        throw std::domain_error("shift_integral: pole on the domain boundary");
    if (p > wmax) {
        // pole beyond the ceiling: regular, only the w = 0 endpoint needs care
        const double c = 0.25 * std::min(wmax, p);
        r += detail::gk_adaptive(transformed, 0.0, std::sqrt(c), rel_tol);
        r += detail::gk_adaptive(direct, c, wmax, rel_tol);
        return r;
    }

    const double A = std::min(0.5 * p, wmax - p);
    auto folded = [&](double u) {
        return (j(p + u) / (p + u) - j(p - u) / (p - u)) / u;
    };
    r += detail::gk_adaptive(folded, 0.0, A, rel_tol);
    const double left_end = p - A; // >= p/2 > 0
    const double c = std::min(0.5 * left_end, std::max(1e-3 * wmax, 1e-6));
    r += detail::gk_adaptive(transformed, 0.0, std::sqrt(c), rel_tol);
    r += detail::gk_adaptive(direct, c, left_end, rel_tol);
    if (p + A < wmax) r += detail::gk_adaptive(direct, p + A, wmax, rel_tol);
    return r;
}

// ---- generic principal-value evaluator -------------------------------------

enum class KernelKind { sinc, sinc_squared_over_square, sine_over_square, rational };

struct PVIntegralSpec {
    std::function<double(double)> weight;
    KernelKind kernel{KernelKind::sine_over_square};
    double pole{0.0};    // a pole <= 0 lies outside the integration domain
    double time{0.0};
    double omega_max{1.0};
};

inline QuadratureResult pv_integrate(const PVIntegralSpec& spec,
                                     double rel_tol = default_rel_tol) {
    if (!(rel_tol > 1e-12 && rel_tol < 1e-2))
        throw std::invalid_argument("pv_integrate: rel_tol outside (1e-12, 1e-2)");
    if (!(spec.omega_max > 0.0))
        throw std::invalid_argument("pv_integrate: empty domain");
    const auto& w = spec.weight;
    const double W = spec.pole;
    const double t = spec.time;
    const double wmax = spec.omega_max;

    switch (spec.kernel) {
    case KernelKind::sinc: {
        // sin((w-W)t)/(w-W): removable at the pole, no principal value needed
        auto f = [&](double x) { return w(x) * t * detail::sinc((x - W) * t); };
        QuadratureResult r;
        if (W > 0.0 && W < wmax) {
            r += detail::oscillatory(f, 0.0, W, t, W, rel_tol);
            r += detail::oscillatory(f, W, wmax, t, W, rel_tol);
        } else {
            r += detail::oscillatory(f, 0.0, wmax, t, W, rel_tol);
        }
        return r;
    }
    case KernelKind::sinc_squared_over_square:
        return sinc_squared_integral(w, W, t, wmax, rel_tol);
    case KernelKind::sine_over_square:
        return sine_over_square_integral(w, W, t, wmax, rel_tol);
    case KernelKind::rational: {
        if (W <= 0.0 || W >= wmax) {
            if (W == 0.0 || W == wmax)
                throw std::domain_error("pv_integrate: pole on the domain boundary");
            auto f = [&](double x) { return w(x) / (x - W); };
            return detail::gk_adaptive(f, 0.0, wmax, rel_tol);
        }
        if (std::min(W, wmax - W) < 1e-12 * wmax)
            throw std::domain_error("pv_integrate: pole on the domain boundary");
        const double A = std::min(W, wmax - W);
        auto folded = [&](double u) { return (w(W + u) - w(W - u)) / u; };
        auto direct = [&](double x) { return w(x) / (x - W); };
        QuadratureResult r;
        r += detail::gk_adaptive(folded, 0.0, A, rel_tol);
        if (W <= wmax - W)
            r += detail::gk_adaptive(direct, 2.0 * W, wmax, rel_tol);
        else
            r += detail::gk_adaptive(direct, 0.0, 2.0 * W - wmax, rel_tol);
        return r;
    }
    }
    throw std::logic_error("pv_integrate: unknown kernel kind");
}

// Tail truncation rule for spectral integrands with cutoff L.
inline double tail_cutoff(double L, double pole, double t) {
    const double osc = t > 0.0 ? 50.0 / t : 0.0;
    return std::max(10.0 * L, std::max(pole, 0.0) + osc);
}

} // namespace chiraldyn::quad
