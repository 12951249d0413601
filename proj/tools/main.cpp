#include "globth/catalog.hpp"

int main(int argc, char **argv) { return globth::cli_dispatch(argc, argv); }
