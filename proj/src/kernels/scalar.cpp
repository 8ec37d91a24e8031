#include "qrskit/kernels/kernels.hpp"

#include "kernel_impl.hpp"

namespace qrskit::kernels {
namespace scalar {

void correlate_stride2(std::span<const double> src, std::span<const double> taps,
                       std::span<double> out) {
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = detail::dot_stride2(src.data() + 2 * k, taps);
    }
}

void correlate_pair(std::span<const double> a, std::span<const double> taps_a,
                    std::span<const double> b, std::span<const double> taps_b,
                    std::span<double> out) {
    for (std::size_t m = 0; m < out.size(); ++m) {
        out[m] = detail::dot_pair(a.data() + m, taps_a, b.data() + m, taps_b);
    }
}

void five_point_derivative(std::span<const double> x, double scale, std::span<double> out) {
    for (std::size_t n = 0; n < x.size(); ++n) {
        out[n] = detail::derivative_at(x, n, scale);
    }
}

void square(std::span<const double> x, std::span<double> out) {
    for (std::size_t n = 0; n < x.size(); ++n) {
        out[n] = x[n] * x[n];
    }
}

void trailing_mean(std::span<const double> x, std::size_t width, std::span<double> out) {
    for (std::size_t n = 0; n < x.size(); ++n) {
        out[n] = detail::trailing_mean_at(x, n, width);
    }
}

void product_of_sum(std::span<const double> a, std::span<const double> b,
                    std::span<const double> c, double scale, std::span<double> out) {
    for (std::size_t n = 0; n < a.size(); ++n) {
        out[n] = a[n] * (b[n] + c[n]) * scale;
    }
}

void accumulate(std::span<const double> x, std::span<double> out) {
    for (std::size_t n = 0; n < x.size(); ++n) {
        out[n] += x[n];
    }
}

}  // namespace scalar

const KernelTable& scalar_table() {
    static const KernelTable table{
        "scalar",
        &scalar::correlate_stride2,
        &scalar::correlate_pair,
        &scalar::five_point_derivative,
        &scalar::square,
        &scalar::trailing_mean,
        &scalar::product_of_sum,
        &scalar::accumulate,
    };
    return table;
}

}  // namespace qrskit::kernels
