#include "qplpf/cli.hpp"

int main(int argc, char** argv) {
    return qplpf::cli::run(argc, argv);
}
