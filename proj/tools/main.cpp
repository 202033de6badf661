#include "lvsg/cli.hpp"

int main(int argc, char** argv)
{
    return lvsg::cli::run(argc, argv);
}
