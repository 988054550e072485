#include <string>
#include <vector>

#include "streamcd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return streamcd::cli::run(args);
}
