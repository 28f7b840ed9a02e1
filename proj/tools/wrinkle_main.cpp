#include <string>
#include <vector>

#include "wrinkle/cli.hpp"

int main(int argc, char** argv) {
  return wrinkle::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
