#include "app.hpp"

int main(int argc, char** argv) { return ramified::cli::run(argc, argv); }
