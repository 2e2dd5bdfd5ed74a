#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "qorch/domain/types.hpp"

namespace qorch::engine {

// Append-only JSON-lines journal of engine state transitions. The file is
// the engine's only persistence; replaying it rebuilds definitions,
// instances, histories and the pending job backlog.
class EventLog {
  public:
    EventLog() = default;  // in-memory only

    // Opens path for appending (creating it if needed).
    explicit EventLog(const std::string& path);

    void append(const domain::json& event);

    const std::vector<domain::json>& events() const { return events_; }

    static std::vector<domain::json> read_file(const std::string& path);

  private:
    std::ofstream out_;
    std::vector<domain::json> events_;
};

}  // namespace qorch::engine
