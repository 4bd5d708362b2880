// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any fails.
#include <cstdlib>
#include <iostream>

#include "lipext/acceptance.hpp"

int main() {
    lipext::AcceptanceOptions options;
    bool all = true;
    for (int id : lipext::criterion_ids()) {
        const lipext::CriterionResult r = lipext::run_criterion(id, options);
        std::cout << lipext::format_result_line(r) << std::endl;
        all &= r.passed;
    }
    std::cout << (all ? "all acceptance criteria passed" : "some acceptance criteria FAILED") << std::endl;
    return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
