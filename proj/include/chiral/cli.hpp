#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chiral/json_io.hpp"

namespace chiral::cli {

// Exit codes: 0 success, 1 computation failure (including failed checks), 2 argument error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct Outcome {
  int exit_code = 0;
  json_io::Json output;  // null unless a command ran
  std::string text;      // help text
  std::string format = "json";
  std::string error;
};
// Parses and runs one command without printing.
Outcome execute(const std::vector<std::string>& args);

// Library operation → owning subcommand.
struct RegistryEntry {
  std::string module;
  std::string operation;
  std::string subcommand;  // "mobius iwasawa", "pcw kappa", …
};
const std::vector<RegistryEntry>& operation_registry();
// Every leaf subcommand, space separated for nested ones.
std::vector<std::string> subcommands();

// Argument vectors recorded by `baseline record`.
std::vector<std::vector<std::string>> baseline_battery();

// Worker threads for fan-out: CHIRAL_KERNEL_THREADS if set and positive, else the hardware count.
int worker_threads();

}  // namespace chiral::cli
