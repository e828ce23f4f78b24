#include <algorithm>
#include <cstdint>
#include <vector>

#include <omp.h>

#include "bslip/kernels.hpp"
#include "kernels_detail.hpp"

namespace bslip::kernels::omp {

void matvec(std::span<const double> a, int rows, int cols, std::span<const double> x, std::span<double> y)
{
#pragma omp parallel for schedule(static)
    for (int i = 0; i < rows; ++i) {
        const double* row = a.data() + static_cast<std::size_t>(i) * cols;
        double acc = 0.0;
        for (int j = 0; j < cols; ++j) {
            acc += row[j] * x[j];
        }
        y[i] = acc;
    }
}

void matvec_transposed(std::span<const double> a, int rows, int cols, std::span<const double> x, std::span<double> y)
{
#pragma omp parallel for schedule(static)
    for (int j = 0; j < cols; ++j) {
        double acc = 0.0;
        for (int i = 0; i < rows; ++i) {
            acc += a[static_cast<std::size_t>(i) * cols + j] * x[i];
        }
        y[j] = acc;
    }
}

// States are independent; choices are packed afterwards one word per
// iteration, so no two threads write the same word.
void frontier_step(const FrontierStep& step, std::span<const double> prev, std::span<double> next,
                   std::span<std::uint64_t> choices)
{
    const int bits = choice_bits(step.n_values);
    const std::int64_t per_word = 64 / bits;
    const std::int64_t entries = step.n_states * step.budget_len;
    const std::int64_t words = static_cast<std::int64_t>(choices.size());
    std::vector<std::uint8_t> arg(static_cast<std::size_t>(entries));
#pragma omp parallel for schedule(static)
    for (std::int64_t s = 0; s < step.n_states; ++s) {
        const std::int64_t off = s * step.budget_len;
        detail::frontier_state(step, prev.data(), s, next.data() + off, arg.data() + off);
    }
#pragma omp parallel for schedule(static)
    for (std::int64_t w = 0; w < words; ++w) {
        const std::int64_t begin = w * per_word;
        choices[static_cast<std::size_t>(w)] = detail::pack_word(arg.data(), begin, std::min(entries, begin + per_word), bits);
    }
}

} // namespace bslip::kernels::omp
