#pragma once

#include <chrono>
#include <cstdint>

namespace qorch {

// Injectable time source; lock deadlines and history timestamps go through
// this so tests can drive expiry deterministically.
struct Clock {
    virtual ~Clock() = default;
    virtual std::int64_t now_ms() const = 0;
};

class SystemClock final : public Clock {
  public:
    std::int64_t now_ms() const override {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::system_clock::now().time_since_epoch())
            .count();
    }
};

class MockClock final : public Clock {
  public:
    explicit MockClock(std::int64_t start = 0) : t_(start) {}
    std::int64_t now_ms() const override { return t_; }
    void advance(std::int64_t ms) { t_ += ms; }
    void set(std::int64_t t) { t_ = t; }

  private:
    std::int64_t t_;
};

}  // namespace qorch
