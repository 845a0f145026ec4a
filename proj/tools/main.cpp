#include <string>
#include <vector>

#include "finescale/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return finescale::cli::run(args);
}
