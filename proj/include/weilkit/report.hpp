#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace weilkit {

struct ReportEntry {
    std::string check;
    std::string instance;
    bool pass = false;
    std::string certificate;
};

/// Ordered list of verdicts. Entries keep insertion order so a fixed seed
/// gives a byte-identical rendering.
class Report {
public:
    void add(ReportEntry e) { entries_.push_back(std::move(e)); }
    void add(std::string check, std::string instance, bool pass, std::string certificate) {
        entries_.push_back({std::move(check), std::move(instance), pass, std::move(certificate)});
    }
    void merge(const Report &other);

    const std::vector<ReportEntry> &entries() const { return entries_; }
    std::size_t failures() const;
    bool all_pass() const { return failures() == 0; }

    /// One line per entry: `PASS  check  [instance]  certificate`.
    std::string text() const;
    /// Line-oriented `key=value` form with a stable key order.
    std::string kv() const;

private:
    std::vector<ReportEntry> entries_;
};

} // namespace weilkit
