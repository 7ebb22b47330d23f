#pragma once

#include <functional>
#include <string>
#include <vector>

namespace nodal {

struct AcceptanceRow {
  int id = 0;
  std::string name;
  bool checks_pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string detail;
  bool passed() const { return checks_pass && seconds < budget_seconds; }
};

constexpr int kAcceptanceCount = 12;

// Runs criterion id (1-based). Exceptions are caught and reported as failures.
AcceptanceRow run_criterion(int id, int threads = 0);
std::vector<AcceptanceRow> run_acceptance(const std::vector<int>& ids, int threads = 0,
                                          const std::function<void(const AcceptanceRow&)>& on_row = {});
std::string acceptance_markdown(const std::vector<AcceptanceRow>& rows);

}  // namespace nodal
