#include "machlimit/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace machlimit {
namespace fft {

namespace {

// Plan creation is not thread-safe in FFTW; execution through
// fftw_execute_dft is. Plans are created FFTW_UNALIGNED so they can run on
// any buffer.
std::mutex plan_mutex;
std::map<std::tuple<int, int, int>, fftw_plan> plan_cache;

fftw_plan get_plan(int d, int n, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_tuple(d, n, sign);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;

    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
    std::vector<cplx> scratch(total);
    std::vector<int> dims(d, n);
    fftw_plan p = fftw_plan_dft(
        d, dims.data(), reinterpret_cast<fftw_complex*>(scratch.data()),
        reinterpret_cast<fftw_complex*>(scratch.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_cache.emplace(key, p);
    return p;
}

void execute(int d, int n, int sign, std::vector<cplx>& data) {
    fftw_plan p = get_plan(d, n, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data.data()),
                     reinterpret_cast<fftw_complex*>(data.data()));
}

} // namespace

void forward_shape(int d, int n, std::vector<cplx>& data) {
    execute(d, n, FFTW_FORWARD, data);
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& c : data) c *= scale;
}

void backward_shape(int d, int n, std::vector<cplx>& data) {
    execute(d, n, FFTW_BACKWARD, data);
}

void forward(const Grid& grid, std::vector<cplx>& data) {
    forward_shape(grid.dim(), grid.n(), data);
}

void backward(const Grid& grid, std::vector<cplx>& data) {
    backward_shape(grid.dim(), grid.n(), data);
}

} // namespace fft
} // namespace machlimit
