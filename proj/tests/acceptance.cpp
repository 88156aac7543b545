// Acceptance run: one PASS/FAIL line per criterion over the built-in catalog.
// Tolerances live with each check in src/verify.cpp; the CLI determinism
// criterion is checked here against the real binary.

#include <chrono>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "kcone/verify.hpp"

namespace {

struct Capture {
  int code = -1;
  std::string out;
};

Capture capture(const std::string& cmd) {
  Capture c;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return c;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) c.out.append(buf, got);
  const int status = pclose(pipe);
  c.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return c;
}

// Worst check as a fraction of its tolerance.
const kcone::Check* worst(const kcone::Criterion& c) {
  const kcone::Check* w = nullptr;
  double ratio = -1.0;
  for (const auto& ch : c.checks) {
    const double r = ch.tol > 0.0 ? ch.max_dev / ch.tol : (ch.pass ? 0.0 : 1e300);
    if (!ch.pass) return &ch;
    if (r > ratio) ratio = r, w = &ch;
  }
  return w;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const auto results = kcone::run_verification(kcone::catalog_targets());
  const double seconds = std::chrono::duration<double>(clock::now() - t0).count();

  int failed = 0;
  for (const auto& c : results) {
    const auto* w = worst(c);
    const bool ok = c.pass() && !c.checks.empty();
    if (!ok) ++failed;
    std::printf("%s  %2d  %-44s checks=%-3zu", ok ? "PASS" : "FAIL", c.id, c.title.c_str(), c.checks.size());
    if (w) std::printf(" worst: %s = %.3e (tol %.1e)", w->name.c_str(), w->max_dev, w->tol);
    std::printf("\n");
    if (!ok)
      for (const auto& ch : c.checks)
        if (!ch.pass) std::printf("        failed: %s = %.6e (tol %.1e)\n", ch.name.c_str(), ch.max_dev, ch.tol);
    for (const auto& note : c.notes) std::printf("        note: %s\n", note.c_str());
  }

  const std::string cmd = std::string(KCONE_CLI_PATH) + " verify";
  const auto a = capture(cmd);
  const auto b = capture(cmd);
  const bool same = a.code == 0 && b.code == 0 && !a.out.empty() && a.out == b.out;
  if (!same) ++failed;
  std::printf("%s  14  %-44s bytes=%zu exit=%d,%d\n", same ? "PASS" : "FAIL",
              "CLI verify output is byte-identical", a.out.size(), a.code, b.code);

  std::printf("suite time %.2f s (budget 10 s)\n", seconds);
  if (seconds > 10.0) {
    std::printf("FAIL  suite exceeded its time budget\n");
    ++failed;
  }
  std::printf("%d of 14 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
