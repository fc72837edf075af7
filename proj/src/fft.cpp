#include "coe/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace coe::fft {

namespace {

// fftw planning is not thread-safe, execution on new arrays is.
class PlanCache
{
public:
  ~PlanCache()
  {
    for (auto& [key, plan] : plans_) {
      fftw_destroy_plan(plan);
    }
  }

  fftw_plan dft(int n, int howmany, int sign)
  {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(0, n, howmany, sign);
    if (auto it = plans_.find(key); it != plans_.end()) {
      return it->second;
    }
    fftw_complex* buffer = fftw_alloc_complex(static_cast<std::size_t>(n) * howmany);
    int dims[] = {n};
    fftw_plan plan = fftw_plan_many_dft(1, dims, howmany, buffer, nullptr, 1, n, buffer, nullptr, 1, n, sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buffer);
    plans_.emplace(key, plan);
    return plan;
  }

  fftw_plan dst2d(int ny, int nz)
  {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(1, ny, nz, 0);
    if (auto it = plans_.find(key); it != plans_.end()) {
      return it->second;
    }
    double* buffer = fftw_alloc_real(static_cast<std::size_t>(ny) * nz);
    fftw_plan plan = fftw_plan_r2r_2d(ny, nz, buffer, buffer, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buffer);
    plans_.emplace(key, plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int, int>, fftw_plan> plans_;
};

PlanCache& cache()
{
  static PlanCache instance;
  return instance;
}

CMatrix transform(const CMatrix& data, int sign)
{
  CMatrix out = data;
  if (out.size() == 0) {
    return out;
  }
  const int n = static_cast<int>(out.rows());
  const int howmany = static_cast<int>(out.cols());
  fftw_plan plan = cache().dft(n, howmany, sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, ptr, ptr);
  return out;
}

} // namespace

CMatrix forward_columns(const CMatrix& data)
{
  return transform(data, FFTW_FORWARD);
}

CMatrix inverse_columns(const CMatrix& data)
{
  CMatrix out = transform(data, FFTW_BACKWARD);
  out /= static_cast<double>(data.rows());
  return out;
}

CVector forward(const CVector& data)
{
  return forward_columns(data);
}

CVector inverse(const CVector& data)
{
  return inverse_columns(data);
}

void dst1_2d(double* data, int ny, int nz)
{
  fftw_plan plan = cache().dst2d(ny, nz);
  fftw_execute_r2r(plan, data, data);
}

} // namespace coe::fft
