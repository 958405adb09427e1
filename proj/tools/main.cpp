#include "ehl/cli_app.hpp"

int main(int argc, char** argv) { return ehl::cli_main(argc, argv); }
