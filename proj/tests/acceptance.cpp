#include <cstdio>
#include <cstdlib>
#include <vector>

#include "nodal/acceptance.hpp"

// Usage: acceptance [id ...]; no ids runs all criteria.
int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int k = 1; k < argc; ++k) ids.push_back(std::atoi(argv[k]));
  if (ids.empty())
    for (int id = 1; id <= nodal::kAcceptanceCount; ++id) ids.push_back(id);
  int failed = 0;
  nodal::run_acceptance(ids, 0, [&](const nodal::AcceptanceRow& r) {
    failed += !r.passed();
    std::printf("[%s] %2d %-32s %8.2fs (budget %gs)  %s\n", r.passed() ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds, r.budget_seconds, r.detail.c_str());
    std::fflush(stdout);
  });
  std::printf("%zu criteria, %d failed\n", ids.size(), failed);
  return failed ? 1 : 0;
}
