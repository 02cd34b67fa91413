// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>

#include "pulse/audit.hpp"

int main() {
  using clock = std::chrono::steady_clock;
  pulse::AuditOptions options;
  auto last = clock::now();
  int failures = 0;
  const pulse::AuditResult result = pulse::run_audit(options, [&](const pulse::AuditRow& row) {
    const double seconds = std::chrono::duration<double>(clock::now() - last).count();
    last = clock::now();
    std::printf("%s criterion %d %s (%.1fs)\n", row.pass() ? "PASS" : "FAIL", row.id, row.name.c_str(), seconds);
    for (const auto& c : row.checks)
      std::printf("    %-40s %.6g %s %.6g%s\n", c.metric.c_str(), c.value, c.relation.c_str(), c.threshold,
                  c.pass ? "" : "  <-- fail");
    if (!row.error.empty()) std::printf("    error: %s\n", row.error.c_str());
    if (!row.pass()) ++failures;
    std::fflush(stdout);
  });
  std::printf("%d of %zu criteria passed\n", int(result.rows.size()) - failures, result.rows.size());
  return failures == 0 && result.rows.size() == 12 ? 0 : 1;
}
