#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "miner/cli.hpp"

extern char** environ;

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::map<std::string, std::string> env;
    for (char** e = environ; *e; ++e) {
        std::string entry(*e);
        auto eq = entry.find('=');
        if (eq != std::string::npos) env.emplace(entry.substr(0, eq), entry.substr(eq + 1));
    }
    return miner::cli::run_cli(args, env, std::cout, std::cerr);
}
