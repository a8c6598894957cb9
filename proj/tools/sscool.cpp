#include <string>
#include <vector>

#include "sscool/cli/run.hpp"

int main(int argc, char** argv) {
  return sscool::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
