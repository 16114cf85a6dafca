#pragma once

#include <string>
#include <vector>

namespace dagvisit {

struct CheckRow {
    std::string suite;
    std::string check;
    std::string expected;
    std::string observed;
    bool pass = false;
};

struct VerifyOptions {
    int universal_count = 500;
    int universal_max_n = 400;
    int seed = 1;
    int converter_traces = 200;
    int converter_partitions = 50;
    int threads = 0;  // 0 = hardware concurrency
};

std::vector<std::string> suite_names();

/// Runs one named suite ("diamond-io", "hong-kung", "universal-bounds",
/// "tightness", "pebbling", "converters", "oracles" or "all").
std::vector<CheckRow> run_suite(const std::string& name, const VerifyOptions& opts = {});

bool all_pass(const std::vector<CheckRow>& rows);
std::string rows_to_csv(const std::vector<CheckRow>& rows);

}  // namespace dagvisit
