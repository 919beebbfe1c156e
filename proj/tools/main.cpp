#include "cli_app.hpp"

int main(int argc, char** argv) { return walshlp::cli::run(argc, argv); }
