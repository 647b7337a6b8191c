#include <iostream>
#include <string>
#include <vector>

#include "fracsys/cli.h"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return fracsys::run(args, std::cout, std::cerr);
}
