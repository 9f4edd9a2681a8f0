#include "klsign/cli.hpp"

int main(int argc, char** argv)
{
    return klsign::cli::main_entry(argc, argv);
}
