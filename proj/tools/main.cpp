#include <ccnsim/cli.hpp>

int main(int argc, char** argv)
{
  return ccnsim::cliMain(argc, argv);
}
