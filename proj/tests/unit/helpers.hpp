#pragma once

#include <utility>
#include <vector>

#include <gmpxx.h>

#include "fppu/posit.hpp"

namespace testing_helpers {

inline mpq_class to_mpq(const fppu::Dyadic& d) {
  mpq_class v(mpz_class(static_cast<long>(d.significand)));
  mpz_class p = 1;
  mpz_mul_2exp(p.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(d.exp2 < 0 ? -d.exp2 : d.exp2));
  if (d.exp2 >= 0) v *= p;
  else v /= p;
  return v;
}

/// Every shape small enough for pairwise sweeps.
inline std::vector<std::pair<int, int>> small_shapes() {
  std::vector<std::pair<int, int>> out;
  for (int n = 3; n <= 8; ++n)
    for (int es = 0; es <= 4 && es + 2 <= n; ++es) out.emplace_back(n, es);
  return out;
}

}  // namespace testing_helpers
