#include "ruler/cli.hpp"

int main(int argc, char** argv) {
  return ruler::run_cli(std::vector<std::string>(argv, argv + argc));
}
