#include "weilkit/report.hpp"

#include <sstream>

namespace weilkit {

namespace {

// Values stay on one line in both renderings.
std::string one_line(const std::string &s) {
    std::string out;
    for (char c : s)
        out += (c == '\n' || c == '\r') ? ' ' : c;
    return out;
}

} // namespace

void Report::merge(const Report &other) {
    entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

std::size_t Report::failures() const {
    std::size_t n = 0;
    for (const auto &e : entries_)
        n += e.pass ? 0 : 1;
    return n;
}

std::string Report::text() const {
    std::ostringstream os;
    for (const auto &e : entries_)
        os << (e.pass ? "PASS" : "FAIL") << "  " << e.check << "  [" << one_line(e.instance) << "]  "
           << one_line(e.certificate) << "\n";
    os << "summary: " << entries_.size() - failures() << "/" << entries_.size() << " passed\n";
    return os.str();
}

std::string Report::kv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto &e = entries_[i];
        std::string p = "entry." + std::to_string(i + 1) + ".";
        os << p << "check=" << e.check << "\n";
        os << p << "instance=" << one_line(e.instance) << "\n";
        os << p << "status=" << (e.pass ? "PASS" : "FAIL") << "\n";
        os << p << "certificate=" << one_line(e.certificate) << "\n";
    }
    os << "summary.total=" << entries_.size() << "\n";
    os << "summary.failed=" << failures() << "\n";
    return os.str();
}

} // namespace weilkit
