#include <string>
#include <vector>

#include "seenet/cli.hpp"

int main(int argc, char** argv) {
  return seenet::run(std::vector<std::string>(argv + 1, argv + argc));
}
