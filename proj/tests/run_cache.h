// Shared cache of finished simulation runs for the long end-to-end tests.
// A run directory is reused only when its summary records a clean exit, so
// an interrupted or failed run is redone rather than trusted.
#pragma once

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "qflow/qflow.hpp"

inline std::filesystem::path cache_root() {
  if (const char* env = std::getenv("QFLOW_ACCEPTANCE_CACHE"); env && *env) return env;
  return QFLOW_ACCEPTANCE_CACHE_DEFAULT;
}

inline std::map<std::string, std::string> read_summary(const std::filesystem::path& dir) {
  std::map<std::string, std::string> kv;
  std::ifstream in(dir / "summary.txt");
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return kv;
}

// Runs the configuration unless the cache already holds a clean finish.
inline std::filesystem::path cached_run(const std::string& name, qflow::RunConfig cfg) {
  const std::filesystem::path dir = cache_root() / name;
  if (std::filesystem::exists(dir / "summary.txt")) {
    auto kv = read_summary(dir);
    if (kv.count("exit_code") && kv["exit_code"] == "0") {
      std::printf("  [cache] reusing %s\n", name.c_str());
      return dir;
    }
    std::filesystem::remove_all(dir);
  }
  cfg.out = dir.string();
  std::printf("  [run] %s\n", name.c_str());
  std::fflush(stdout);
  const qflow::RunReport rep = qflow::run_simulation(cfg);
  EXPECT_EQ(rep.exit_code, 0) << name << ": " << rep.failure_message;
  return dir;
}
