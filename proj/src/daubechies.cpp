#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrskit/wavelet.hpp"

namespace qrskit::wavelet {
namespace {

using Real = long double;
using Complex = std::complex<Real>;

// Coefficients (constant term first) of the Daubechies half-band polynomial
// P(y) = sum_{k<N} C(N-1+k, k) y^k, where |L(w)|^2 = P(sin^2(w/2)).
std::vector<Real> half_band_polynomial(int order) {
    std::vector<Real> coeffs(static_cast<std::size_t>(order));
    for (int k = 0; k < order; ++k) {
        Real binom = 1;
        for (int i = 1; i <= k; ++i) {
            binom = binom * static_cast<Real>(order - 1 + i) / static_cast<Real>(i);
        }
        coeffs[static_cast<std::size_t>(k)] = binom;
    }
    return coeffs;
}

Complex evaluate(const std::vector<Real>& coeffs, Complex z) {
    Complex acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

Complex evaluate_derivative(const std::vector<Real>& coeffs, Complex z) {
    Complex acc = 0;
    for (std::size_t k = coeffs.size() - 1; k >= 1; --k) {
        acc = acc * z + coeffs[k] * static_cast<Real>(k);
    }
    return acc;
}

// Durand-Kerner on the monic polynomial, then Newton polish on the original.
std::vector<Complex> polynomial_roots(const std::vector<Real>& coeffs) {
    const std::size_t degree = coeffs.size() - 1;
    if (degree == 0) {
        return {};
    }
    std::vector<Real> monic(coeffs);
    for (auto& c : monic) {
        c /= coeffs.back();
    }

    std::vector<Complex> roots(degree);
    const Complex seed(0.4L, 0.9L);
    Complex power = 1;
    for (auto& r : roots) {
        r = power;
        power *= seed;
    }

    for (int iter = 0; iter < 1000; ++iter) {
        Real largest_step = 0;
        for (std::size_t i = 0; i < degree; ++i) {
            Complex denom = 1;
            for (std::size_t j = 0; j < degree; ++j) {
                if (j != i) {
                    denom *= roots[i] - roots[j];
                }
            }
            const Complex step = evaluate(monic, roots[i]) / denom;
            roots[i] -= step;
            largest_step = std::max(largest_step, std::abs(step) / std::max<Real>(1, std::abs(roots[i])));
        }
        if (largest_step < 1e-30L) {
            break;
        }
    }

    for (auto& r : roots) {
        for (int iter = 0; iter < 8; ++iter) {
            const Complex slope = evaluate_derivative(coeffs, r);
            if (std::abs(slope) == 0) {
                break;
            }
            r -= evaluate(coeffs, r) / slope;
        }
    }
    return roots;
}

std::vector<Complex> multiply_linear(const std::vector<Complex>& poly, Complex root) {
    // poly(w) * (w - root)
    std::vector<Complex> out(poly.size() + 1, Complex(0));
    for (std::size_t k = 0; k < poly.size(); ++k) {
        out[k + 1] += poly[k];
        out[k] -= root * poly[k];
    }
    return out;
}

WaveletFilter build_filter(int order) {
    // Each root y of P maps to a conjugate-reciprocal pair of zeros of the
    // filter polynomial through y = (2 - w - 1/w) / 4. Taking the zero outside
    // the unit circle (in w = z^-1) yields the minimum-phase factor.
    std::vector<Complex> poly{Complex(1)};
    for (int i = 0; i < order; ++i) {
        poly = multiply_linear(poly, Complex(-1));
    }
    for (const Complex& y : polynomial_roots(half_band_polynomial(order))) {
        const Complex b = Real(1) - Real(2) * y;
        const Complex disc = std::sqrt(b * b - Real(1));
        Complex w = b + disc;
        if (std::abs(w) < 1) {
            w = b - disc;
        }
        poly = multiply_linear(poly, w);
    }

    Real total = 0;
    for (const auto& c : poly) {
        total += c.real();
    }
    const Real scale = std::numbers::sqrt2_v<Real> / total;

    WaveletFilter filter;
    filter.order = order;
    const std::size_t taps = poly.size();
    filter.lowpass.resize(taps);
    filter.highpass.resize(taps);
    for (std::size_t k = 0; k < taps; ++k) {
        filter.lowpass[k] = static_cast<double>(poly[k].real() * scale);
    }
    for (std::size_t k = 0; k < taps; ++k) {
        const double mirrored = filter.lowpass[taps - 1 - k];
        filter.highpass[k] = (k % 2 == 0) ? mirrored : -mirrored;
    }
    return filter;
}

}  // namespace

const WaveletFilter& daubechies_filter(int order) {
    if (order < kMinOrder || order > kMaxOrder) {
        throw std::invalid_argument("Daubechies order must be in [1, 8], got " + std::to_string(order));
    }
    static const std::array<WaveletFilter, kMaxOrder> filters = [] {
        std::array<WaveletFilter, kMaxOrder> built;
        for (int n = kMinOrder; n <= kMaxOrder; ++n) {
            built[static_cast<std::size_t>(n - 1)] = build_filter(n);
        }
        return built;
    }();
    return filters[static_cast<std::size_t>(order - 1)];
}

}  // namespace qrskit::wavelet
