#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "stagg/simd/kernels.hpp"

using namespace stagg::simd;

namespace {

std::vector<const KernelTable*> variants() {
  std::vector<const KernelTable*> out;
  for (Isa isa : {Isa::avx2, Isa::neon})
    if (isa_available(isa)) out.push_back(&kernels_for(isa));
  return out;
}

std::vector<double> random_vec(std::mt19937_64& g, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(g);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar kernels are always available") {
  CHECK(isa_available(Isa::scalar));
  CHECK(kernels_for(Isa::scalar).isa == Isa::scalar);
  CHECK_FALSE(isa_name(active_kernels().isa).empty());
  MESSAGE("active kernels: " << isa_name(active_kernels().isa));
}

TEST_CASE("vector kernels match the scalar reference") {
  const auto& ref = kernels_for(Isa::scalar);
  std::mt19937_64 g(1);
  for (const KernelTable* k : variants()) {
    INFO("isa " << isa_name(k->isa));
    // lengths straddle every vector width and remainder
    for (std::size_t n = 0; n < 40; ++n) {
      const auto a = random_vec(g, n), b = random_vec(g, n);

      const double d0 = ref.dot(a.data(), b.data(), n);
      const double d1 = k->dot(a.data(), b.data(), n);
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
      CHECK(std::abs(d0 - d1) <= 1e-14 * (1.0 + mag));

      auto y0 = b, y1 = b;
      ref.axpy(0.37, a.data(), y0.data(), n);
      k->axpy(0.37, a.data(), y1.data(), n);
      CHECK(same_bits(y0, y1));

      std::vector<double> c0(n + 1), c1(n + 1);
      ref.bernoulli_convolve(a.data(), c0.data(), n, 0.3);
      k->bernoulli_convolve(a.data(), c1.data(), n, 0.3);
      CHECK(same_bits(c0, c1));

      auto x0 = a, x1 = a, z0 = b, z1 = b;
      ref.rotate(x0.data(), z0.data(), n, 0.6, 0.8);
      k->rotate(x1.data(), z1.data(), n, 0.6, 0.8);
      CHECK(same_bits(x0, x1));
      CHECK(same_bits(z0, z1));
    }
  }
}

TEST_CASE("bernoulli_convolve adds one trial") {
  const std::vector<double> src{0.25, 0.5, 0.25};
  std::vector<double> dst(4);
  bernoulli_convolve(src, dst, 0.5);
  CHECK(dst == std::vector<double>{0.125, 0.375, 0.375, 0.125});
}
