#include <iostream>
#include <string>
#include <vector>

#include "moodmkt/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return moodmkt::run(args, std::cout, std::cerr);
}
