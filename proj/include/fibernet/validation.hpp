#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fibernet/network.hpp"
#include "fibernet/splitter.hpp"

namespace fibernet {

struct ChainOptions {
    std::size_t max_elements = 6;
    bool lossless = false;       // eta = 1, R + T = 1, no atoms
    bool allow_chiral = true;
};

// Random chain with parameters drawn inside the valid ranges.
NetworkSpec random_chain(std::mt19937_64& rng, const ChainOptions& opt = {});

struct SuiteResult {
    std::string name;
    bool passed = false;
    double max_error = 0.0;
    double tolerance = 0.0;
    std::size_t checks = 0;
};

// determinant, unitarity, conservation, oracle-equivalence, parameter-mapping
std::vector<SuiteResult> run_validation_suites(std::uint64_t seed = 20240601);

}  // namespace fibernet
