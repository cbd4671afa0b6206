#include <iostream>
#include <string>
#include <vector>

#include "congcount/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const auto cmd = congcount::cli::parse_args(args);
        return congcount::cli::run(cmd);
    } catch (const congcount::cli::usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        std::cerr << "try 'congcount --help'\n";
        return congcount::cli::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return congcount::cli::kExitAssert;
    }
}
