#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "pwcanard/acceptance.hpp"

// Usage: acceptance [id ...]
int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    int failed = 0;
    for (int id : ids.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10} : ids) {
        const auto r = pwc::acceptance::run_criterion(id);
        std::printf("%s\n", pwc::acceptance::format_line(r).c_str());
        std::fflush(stdout);
        failed += !r.pass;
    }
    std::printf("%d of %zu criteria failed\n", failed, ids.empty() ? std::size_t{10} : ids.size());
    return failed ? 1 : 0;
}
