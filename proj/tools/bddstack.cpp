#include <bddstack/cli.hpp>

int main(int argc, char** argv) {
  return bddstack::cli_main(argc, argv);
}
