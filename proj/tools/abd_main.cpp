#include <string>
#include <vector>

#include <abd/cli.hpp>

int main(int argc, char** argv) {
    return abd::cli::dispatch(std::vector<std::string>(argv, argv + argc));
}
