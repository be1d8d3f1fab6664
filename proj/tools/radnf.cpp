#include <iostream>
#include <string>
#include <vector>

#include <radnf/cli.hpp>

int main(int argc, char **argv)
{
    return radnf::run_command(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
