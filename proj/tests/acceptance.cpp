#include <cstdio>
#include <iostream>
#include <string>
#include <sys/wait.h>

#include "modspec/verify.hpp"

using namespace modspec;

namespace {

struct Run {
  int status;
  std::string out;
};

Run run_cli(const std::string& env, const std::string& args) {
  const std::string cmd = env + " " + MODSPEC_CLI_PATH + " " + args;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

bool report(int id, bool passed, const std::string& detail) {
  std::cout << (passed ? "PASS" : "FAIL") << " criterion " << id << ": " << detail << std::endl;
  return passed;
}

}  // namespace

int main() {
  constexpr std::uint64_t kSeed = 0;
  bool all = true;

  const auto c1 = verify_diagonalization(kSeed);
  all &= report(1, c1.passed && c1.seconds <= 60.0,
                c1.detail + ", runtime " + std::to_string(c1.seconds) + " s (limit 60)");
  for (const auto& c : {verify_uniqueness(kSeed), verify_perturbation(kSeed), verify_minimax(kSeed),
                        verify_exchange_ordering(kSeed), verify_weak_diagonalization(kSeed)})
    all &= report(c.id, c.passed, c.detail);
  const auto c7 = verify_harper(kSeed);
  all &= report(7, c7.passed && c7.seconds <= 30.0,
                c7.detail + ", runtime " + std::to_string(c7.seconds) + " s (limit 30)");

  const auto a = run_cli("MODSPEC_THREADS=1", "verify --seed 0");
  const auto b = run_cli("MODSPEC_THREADS=4", "verify --seed 0");
  const auto c = run_cli("MODSPEC_THREADS=4", "verify --seed 0");
  const bool same = a.out == b.out && b.out == c.out && !a.out.empty();
  all &= report(8, a.status == 0 && b.status == 0 && c.status == 0 && same,
                "exit codes " + std::to_string(a.status) + "/" + std::to_string(b.status) + "/" +
                    std::to_string(c.status) + ", output " +
                    (same ? "identical across 1 and 4 threads and repeated runs" : "DIFFERS"));
  return all ? 0 : 1;
}
