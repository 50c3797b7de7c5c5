#include "cli_app.hpp"

int main(int argc, char** argv) {
    return sta::cli::run(argc, argv);
}
