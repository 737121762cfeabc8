#include "nslab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace nslab::fft {

namespace {

std::mutex planner_mutex;  // FFTW's planner is not thread-safe

fftw_plan get_plan(int dim, int n, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(planner_mutex);
  const auto key = std::make_tuple(dim, n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
  // Plan on a scratch buffer; execution uses the new-array interface.
  // FFTW_UNALIGNED keeps plans valid for ordinary vector storage.
  fftw_complex* scratch = fftw_alloc_complex(total);
  int dims[3] = {n, n, n};
  fftw_plan p = fftw_plan_dft(dim, dims, scratch, scratch, sign,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  if (!p) throw std::runtime_error("fftw plan creation failed");
  cache.emplace(key, p);
  return p;
}

std::size_t cube(int dim, int n) {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
  return total;
}

}  // namespace

void forward(cvec& data, int dim, int n) {
  const std::size_t total = cube(dim, n);
  if (data.size() != total) throw std::invalid_argument("fft::forward: size mismatch");
  fftw_plan p = get_plan(dim, n, FFTW_FORWARD);
  auto* raw = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, raw, raw);
  const double scale = 1.0 / static_cast<double>(total);
  for (auto& c : data) c *= scale;
}

void backward(cvec& data, int dim, int n) {
  const std::size_t total = cube(dim, n);
  if (data.size() != total) throw std::invalid_argument("fft::backward: size mismatch");
  fftw_plan p = get_plan(dim, n, FFTW_BACKWARD);
  auto* raw = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, raw, raw);
}

}  // namespace nslab::fft
