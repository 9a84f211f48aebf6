// Prints the gap (h(E({1} u [3, inf))), h(E({1, 2}))) and the first few
// gaps of the B = 4 catalog.

#include <cstdio>

#include "esnd/gaps.hpp"

int main() {
  const auto g = esnd::berend_gap();
  std::printf("Berend gap: (%.12f, %.12f), length %.12f\n", g.left.point, g.right.point, g.length());

  const auto catalog = esnd::gap_catalog(4);
  for (const auto& gap : catalog.gaps)
    std::printf("%-18s (%.10f, %.10f)\n", gap.s1.to_string().c_str(), gap.left.point, gap.right.point);
  std::printf("total length %.10f of %.10f\n", catalog.total_length, esnd::kDensityRangeLength);
  return 0;
}
