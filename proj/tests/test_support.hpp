#pragma once

#include <string>

#ifndef CONLEY_TEST_DATA_DIR
#define CONLEY_TEST_DATA_DIR "."
#endif

inline std::string test_data(const std::string& name) {
    return std::string(CONLEY_TEST_DATA_DIR) + "/" + name;
}
