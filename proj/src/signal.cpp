#include "qrskit/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace qrskit {

void require_valid_rate(double sample_rate_hz) {
    if (!std::isfinite(sample_rate_hz) || sample_rate_hz <= 0.0) {
        throw std::invalid_argument("sample rate must be finite and positive, got " +
                                    std::to_string(sample_rate_hz));
    }
}

Signal make_signal(std::vector<double> samples, double sample_rate_hz, std::string label) {
    require_valid_rate(sample_rate_hz);
    return Signal{std::move(samples), sample_rate_hz, std::move(label)};
}

Signal with_samples(const Signal& like, std::vector<double> samples) {
    return Signal{std::move(samples), like.sample_rate_hz, like.label};
}

std::size_t ms_to_samples(double ms, double sample_rate_hz) {
    if (!std::isfinite(ms) || ms < 0.0) {
        throw std::invalid_argument("duration must be finite and non-negative");
    }
    return static_cast<std::size_t>(std::llround(ms * sample_rate_hz / 1000.0));
}

}  // namespace qrskit
