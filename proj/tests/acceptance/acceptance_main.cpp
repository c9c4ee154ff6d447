// Standalone acceptance suite: one pass/fail line per criterion.
#include <cstring>
#include <iostream>
#include <vector>

#include "criteria.hpp"

int main(int argc, char** argv) {
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
    const int failures = euler1d::acceptance::run_criteria(ids, std::cout);
    if (failures == 0) {
        std::cout << "all criteria passed\n";
        return 0;
    }
    std::cout << failures << " criteria failed\n";
    return 1;
}
