#include "qorch/engine/event_log.hpp"

#include <stdexcept>

namespace qorch::engine {

EventLog::EventLog(const std::string& path) {
    out_.open(path, std::ios::app);
    if (!out_) throw std::runtime_error("cannot open event log '" + path + "'");
}

void EventLog::append(const domain::json& event) {
    events_.push_back(event);
    if (out_.is_open()) {
        out_ << event.dump() << "\n";
        out_.flush();
    }
}

std::vector<domain::json> EventLog::read_file(const std::string& path) {
    std::vector<domain::json> events;
    std::ifstream in(path);
    if (!in) return events;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        events.push_back(domain::json::parse(line));
    }
    return events;
}

}  // namespace qorch::engine
