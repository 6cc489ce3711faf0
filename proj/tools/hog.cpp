#include <unistd.h>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "hog/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto outcome = hog::cli::run(args, hog::cli::process_environment(), std::filesystem::current_path().string());
  std::cout << outcome.out << std::flush;
  std::cerr << outcome.err << std::flush;
  return outcome.exit_code;
}
