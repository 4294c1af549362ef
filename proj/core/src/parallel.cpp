#include "bkgtfk/parallel.hpp"

namespace bkgtfk {

double pairwise_sum(std::span<const double> values) noexcept {
    if (values.size() <= 16) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace bkgtfk
