#include "qchab/cli.hpp"

int main(int argc, char** argv) { return qchab::cli::run(argc, argv); }
