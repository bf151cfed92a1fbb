#include "fft_backend.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace pdolab::detail {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

    fftw_plan get(int dim, std::size_t points, bool in_place, int sign) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(dim, points, in_place, sign);
        if (auto it = plans_.find(key); it != plans_.end()) {
            return it->second;
        }
        std::size_t total = 1;
        int dims[3];
        for (int d = 0; d < dim; ++d) {
            dims[d] = static_cast<int>(points);
            total *= points;
        }
        auto* a = fftw_alloc_complex(total);
        auto* b = in_place ? a : fftw_alloc_complex(total);
        const unsigned flags =
            FFTW_ESTIMATE | FFTW_UNALIGNED | (in_place ? 0u : FFTW_PRESERVE_INPUT);
        fftw_plan plan = fftw_plan_dft(dim, dims, a, b, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, flags);
        if (!in_place) {
            fftw_free(b);
        }
        fftw_free(a);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, std::size_t, bool, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

} // namespace

void dft(int dim, std::size_t points, const std::complex<double>* in,
         std::complex<double>* out, int sign) {
    const bool in_place = in == out;
    fftw_plan plan = cache().get(dim, points, in_place, sign);
    // Out-of-place plans are built with FFTW_PRESERVE_INPUT.
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in));
    auto* dst = reinterpret_cast<fftw_complex*>(out);
    fftw_execute_dft(plan, src, dst);
}

} // namespace pdolab::detail
