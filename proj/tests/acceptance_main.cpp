#include <cstdio>
#include <iostream>

#include "cdaglab/parallel.hpp"
#include "cdaglab/suite.hpp"

int main() {
    using namespace cdaglab;
    SuiteResult r = run_acceptance_suite(default_threads());
    std::cout << suite_text(r);
    return r.all_pass() ? 0 : 1;
}
