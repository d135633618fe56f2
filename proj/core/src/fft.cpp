#include "tfr/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "tfr/error.hpp"

namespace tfr::fft {
namespace {

enum class Kind { c2c_1d_fwd, c2c_2d_fwd, c2c_2d_bwd, r2c_2d, c2r_2d };

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(Kind kind, std::size_t n) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(kind, n);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    fftw_plan plan = create(kind, static_cast<int>(n));
    if (plan == nullptr)
      throw Error(ErrorCode::invalid_argument, "FFTW failed to plan size " + std::to_string(n));
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  PlanCache() = default;

  static fftw_plan create(Kind kind, int n) {
    constexpr unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const std::size_t nn = static_cast<std::size_t>(n);
    // FFTW_ESTIMATE never touches the arrays, but they must exist.
    std::vector<Complex> c(nn * nn + 1);
    std::vector<double> r(nn * nn + 1);
    auto* cp = reinterpret_cast<fftw_complex*>(c.data());
    switch (kind) {
      case Kind::c2c_1d_fwd: return fftw_plan_dft_1d(n, cp, cp, FFTW_FORWARD, flags);
      case Kind::c2c_2d_fwd: return fftw_plan_dft_2d(n, n, cp, cp, FFTW_FORWARD, flags);
      case Kind::c2c_2d_bwd: return fftw_plan_dft_2d(n, n, cp, cp, FFTW_BACKWARD, flags);
      case Kind::r2c_2d: return fftw_plan_dft_r2c_2d(n, n, r.data(), cp, flags);
      case Kind::c2r_2d: return fftw_plan_dft_c2r_2d(n, n, cp, r.data(), flags);
    }
    return nullptr;
  }

  std::mutex mutex_;
  std::map<std::pair<Kind, std::size_t>, fftw_plan> plans_;
};

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::dimension_mismatch, what);
}

}  // namespace

void forward(std::span<Complex> data) {
  if (data.empty()) return;
  auto plan = PlanCache::instance().get(Kind::c2c_1d_fwd, data.size());
  fftw_execute_dft(plan, as_fftw(data.data()), as_fftw(data.data()));
}

void forward_2d(std::span<Complex> data, std::size_t n) {
  require(data.size() == n * n, "forward_2d: buffer is not n x n");
  auto plan = PlanCache::instance().get(Kind::c2c_2d_fwd, n);
  fftw_execute_dft(plan, as_fftw(data.data()), as_fftw(data.data()));
}

void backward_2d(std::span<Complex> data, std::size_t n) {
  require(data.size() == n * n, "backward_2d: buffer is not n x n");
  auto plan = PlanCache::instance().get(Kind::c2c_2d_bwd, n);
  fftw_execute_dft(plan, as_fftw(data.data()), as_fftw(data.data()));
}

void forward_2d_real(std::span<const double> in, std::span<Complex> out, std::size_t n) {
  require(in.size() == n * n, "forward_2d_real: input is not n x n");
  require(out.size() == half_size(n), "forward_2d_real: output is not n x (n/2+1)");
  auto plan = PlanCache::instance().get(Kind::r2c_2d, n);
  // r2c with FFTW_ESTIMATE does not write its input.
  fftw_execute_dft_r2c(plan, const_cast<double*>(in.data()), as_fftw(out.data()));
}

void backward_2d_real(std::span<Complex> half, std::span<double> out, std::size_t n) {
  require(half.size() == half_size(n), "backward_2d_real: input is not n x (n/2+1)");
  require(out.size() == n * n, "backward_2d_real: output is not n x n");
  auto plan = PlanCache::instance().get(Kind::c2r_2d, n);
  fftw_execute_dft_c2r(plan, as_fftw(half.data()), out.data());
}

}  // namespace tfr::fft
