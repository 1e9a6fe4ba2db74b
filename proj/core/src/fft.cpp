#include "mgsim/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "mgsim/errors.hpp"

namespace mgsim::spectral {
namespace {

// FFTW_ESTIMATE keeps plan selection deterministic, so repeated runs produce
// bit-identical output.
class PlanPair {
 public:
  explicit PlanPair(const Grid& g) {
    std::vector<int> n(g.dims().begin(), g.dims().end());
    AlignedVector<double> real(g.size());
    AlignedVector<Complex> spec(g.spectral_size());
    auto* c = reinterpret_cast<fftw_complex*>(spec.data());
    forward_ = fftw_plan_dft_r2c(g.dim(), n.data(), real.data(), c, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r(g.dim(), n.data(), c, real.data(), FFTW_ESTIMATE);
  }
  ~PlanPair() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }
  PlanPair(const PlanPair&) = delete;
  PlanPair& operator=(const PlanPair&) = delete;

  fftw_plan forward() const { return forward_; }
  fftw_plan inverse() const { return inverse_; }

 private:
  fftw_plan forward_;
  fftw_plan inverse_;
};

const PlanPair& plans_for(const Grid& g) {
  static std::mutex mu;
  static std::map<std::vector<int>, std::unique_ptr<PlanPair>> cache;
  std::vector<int> key(g.dims().begin(), g.dims().end());
  std::lock_guard lock(mu);
  auto& slot = cache[key];
  if (!slot) slot = std::make_unique<PlanPair>(g);
  return *slot;
}

}  // namespace

SpectralField forward_transform(const PhysicalField& f) {
  if (!f.all_finite()) throw NumericalError("forward_transform: non-finite input");
  const Grid& g = f.grid();
  const PlanPair& p = plans_for(g);
  SpectralField out(g);
  // r2c leaves its input intact, but the new-array API takes a non-const pointer.
  AlignedVector<double> in(f.values().begin(), f.values().end());
  fftw_execute_dft_r2c(p.forward(), in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto& c : out.coeffs()) c *= scale;
  return out;
}

PhysicalField inverse_transform(const SpectralField& f) {
  const Grid& g = f.grid();
  const PlanPair& p = plans_for(g);
  // c2r overwrites its input.
  AlignedVector<Complex> scratch(f.coeffs().begin(), f.coeffs().end());
  PhysicalField out(g);
  fftw_execute_dft_c2r(p.inverse(), reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  return out;
}

}  // namespace mgsim::spectral
