// Acceptance gate: runs every suite check and prints one pass/fail line per
// criterion. Exit code 0 only if all pass. Optional argv[1] selects the base
// field (default Q); REFLEXA_SEED controls the randomized checks.

#include <iostream>

#include "reflexa/json_io.hpp"
#include "reflexa/suite.hpp"

int main(int argc, char** argv) {
    using namespace reflexa;
    Field f = argc > 1 ? field_from_flag(argv[1]) : Field::rationals();
    Report rep = run_acceptance_suite(f);
    std::size_t n = 0;
    for (const auto& r : rep.records) {
        std::cout << "criterion " << ++n << " [" << r.status << "] " << r.name << "  ("
                  << r.anchor << ")\n";
        if (r.status != "pass" && !r.witness.empty())
            std::cout << "    witness: " << r.witness << "\n";
    }
    std::cout << (rep.all_passed() ? "ALL CRITERIA PASS" : "CRITERIA FAILED") << " over "
              << f.name() << " (seed " << rep.seed << ")\n";
    return rep.exit_code();
}
