// Limit matching ratio of a degree law next to a sampled configuration model.
#include <cstdio>

#include "mmatch/mmatch.hpp"

int main(int argc, char** argv) {
  using namespace mmatch;
  const char* spec = argc > 1 ? argv[1] : "poisson 2";
  auto law = parse_distribution(spec);

  auto report = gamma_ugw(law);
  auto records = historical_records(law);
  std::printf("law            %s\n", law.describe().c_str());
  std::printf("gamma          %.9f\n", report.gamma);
  std::printf("records        %zu\n", records.records.size());
  for (const auto& r : records.records) std::printf("  at %.9f  F = %.9f\n", r.location, r.F);

  const std::size_t n = 50'000;
  auto g = gen_configuration(n, law, 1);
  const double nu = static_cast<double>(matching_number(g)) / static_cast<double>(n);
  const double ks = static_cast<double>(karp_sipser(g, 1).matching.size()) / static_cast<double>(n);
  std::printf("nu/n           %.6f  (n = %zu)\n", nu, n);
  std::printf("karp-sipser/n  %.6f\n", ks);
}
