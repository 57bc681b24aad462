// Runs every acceptance criterion and prints one PASS/FAIL line each. The
// last criterion additionally drives the installed executable.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "qlocality/battery.hpp"

namespace fs = std::filesystem;

namespace {

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string binary_check() {
  const std::string exe = QLOCALITY_EXE;
  const fs::path dir = fs::temp_directory_path() / "qlocality_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string swap = (dir / "swap.json").string();
  const std::string sc = (dir / "sc.json").string();
  const std::string q = " 2>" + (dir / "stderr.txt").string();
  std::string failure;
  if (shell(exe + " gen swap_AB --dims 2,2,2 --out " + swap + q) != 0 ||
      shell(exe + " gen random_semicausal --dims 2,3,2 --seed 4 --representation unitary --out " + sc + q) != 0) {
    return "gen failed";
  }
  const std::string part = " --partition 'A=q0;B=q1;C=q2'";
  const auto o1 = (dir / "o1.json").string(), o2 = (dir / "o2.json").string();
  if (shell(exe + " check " + swap + part + " > " + o1 + q) != 1) failure += " swap exit";
  if (shell(exe + " check " + swap + part + " > " + o2 + q) != 1) failure += " swap exit";
  if (slurp(o1) != slurp(o2) || slurp(o1).empty()) failure += " golden";
  if (shell(exe + " check " + sc + part + " > /dev/null" + q) != 0) failure += " semicausal exit";
  if (shell(exe + " check " + sc + " > /dev/null" + q) != 2) failure += " input exit";
  fs::remove_all(dir);
  return failure;
}

}  // namespace

int main() {
  bool ok = true;
  for (const auto& r : qloc::run_battery({})) {
    qloc::CriterionResult shown = r;
    if (r.id == 12) {
      const std::string failure = binary_check();
      if (!failure.empty()) {
        shown.passed = false;
        shown.detail += "; executable:" + failure;
      }
    }
    std::cout << qloc::format_result(shown) << std::endl;
    ok = ok && shown.passed;
  }
  return ok ? 0 : 1;
}
