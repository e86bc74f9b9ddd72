#include <cstdio>

#include "leapfrog/verify.hpp"

int main() {
    const auto results = lf::verify::run_acceptance({true, 1});
    std::fputs(lf::verify::format_report(results).c_str(), stdout);
    int failures = 0;
    for (const auto& r : results)
        if (!r.pass) ++failures;
    if (failures) std::fprintf(stdout, "%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}
