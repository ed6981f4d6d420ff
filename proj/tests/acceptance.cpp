#include "geodeq/verify.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv) {
    int failures = 0;
    for (int id = 1; id <= geodeq::kCriterionCount; ++id) {
        if (argc > 1 && std::to_string(id) != argv[1]) continue;
        const geodeq::CriterionResult r = geodeq::run_criterion(id);
        std::printf("%s %2d %-28s %7.2f s  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds,
                    r.detail.c_str());
        std::fflush(stdout);
        if (!r.passed) ++failures;
    }
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
