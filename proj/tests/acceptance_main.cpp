// Acceptance suite runner: executes every criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code is the number of
// failures. `--quick` restricts to the exact symbolic/combinatorial subset.

#include <cstdio>
#include <cstring>
#include <string>

#include "poincare/verify.hpp"

int main(int argc, char** argv) {
  bool quick = false;
  poincare::verify::Options opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;
    if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc)
      opt.workers = static_cast<unsigned>(std::stoul(argv[++i]));
  }
  const auto results = poincare::verify::run_all(opt, quick);
  int failures = 0;
  double total = 0.0;
  for (const auto& r : results) {
    std::printf("criterion %2d  %-36s  %s  (%.1fs)\n      %s\n", r.id, r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
    if (!r.pass) ++failures;
    total += r.seconds;
  }
  std::printf("%zu criteria, %d failure%s, %.1fs total\n", results.size(), failures,
              failures == 1 ? "" : "s", total);
  return failures;
}
