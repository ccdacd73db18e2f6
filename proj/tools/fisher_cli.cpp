#include "fisher/cli.hpp"

int main(int argc, char** argv) { return fisher::cli::run(argc, argv); }
