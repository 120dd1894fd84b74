#pragma once

#include <string>
#include <vector>

namespace conley {

/// Pass/fail lines collected by the verification operations. Failures are
/// reported here rather than thrown.
struct VerificationReport {
    struct Item {
        std::string check;
        bool pass = false;
        std::string detail;
    };

    std::vector<Item> items;

    void add(std::string check, bool pass, std::string detail = "") {
        items.push_back({std::move(check), pass, std::move(detail)});
    }

    bool all_pass() const {
        for (const auto& item : items)
            if (!item.pass) return false;
        return true;
    }
};

}  // namespace conley
