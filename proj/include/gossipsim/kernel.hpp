#pragma once
#include <cstdint>
#include <functional>
#include <memory>
#include <queue>
#include <vector>

#include "gossipsim/time.hpp"

namespace gossipsim {

// Deterministic discrete-event engine. Events fire in (fire_at, seq)
// order; seq is the global issue order, so equal-time events dispatch
// in the order they were scheduled. Cancelled events never fire.
class SimKernel {
 public:
  using Handler = std::function<void()>;

  struct EventRecord {
    SimTime fire_at = 0;
    std::uint64_t seq = 0;
    Handler handler;
    bool cancelled = false;
    bool fired = false;
  };

  class EventHandle {
   public:
    EventHandle() = default;
    bool valid() const { return !rec_.expired(); }

   private:
    friend class SimKernel;
    explicit EventHandle(std::shared_ptr<EventRecord> rec) : rec_(rec) {}
    std::weak_ptr<EventRecord> rec_;
  };

  struct Stats {
    std::uint64_t scheduled = 0;
    std::uint64_t fired = 0;
    std::uint64_t cancelled = 0;
    std::uint64_t pending() const { return scheduled - fired - cancelled; }
  };

  SimTime now() const { return now_; }

  // Scheduling in the past is a programming error, not a runtime
  // condition; throws std::logic_error.
  EventHandle schedule_at(SimTime fire_at, Handler fn);
  EventHandle schedule_in(SimTime delay, Handler fn) {
    return schedule_at(now_ + delay, std::move(fn));
  }

  // True iff the event had not fired and is now guaranteed not to.
  bool cancel(const EventHandle& h);

  // Dispatches events with fire_at <= limit. Returns the final virtual
  // time: the limit when work remains beyond it, otherwise the time of
  // the last dispatched event.
  SimTime run_until_idle(SimTime limit);

  const Stats& stats() const { return stats_; }

 private:
  struct Later {
    bool operator()(const std::shared_ptr<EventRecord>& a,
                    const std::shared_ptr<EventRecord>& b) const {
      if (a->fire_at != b->fire_at) return a->fire_at > b->fire_at;
      return a->seq > b->seq;
    }
  };

  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  Stats stats_;
  std::priority_queue<std::shared_ptr<EventRecord>,
                      std::vector<std::shared_ptr<EventRecord>>, Later>
      queue_;
};

}  // namespace gossipsim
