#include "gossipsim/kernel.hpp"

#include <stdexcept>
#include <string>

namespace gossipsim {

SimKernel::EventHandle SimKernel::schedule_at(SimTime fire_at, Handler fn) {
  if (fire_at < now_) {
    throw std::logic_error("SimKernel: scheduled event in the past (fire_at=" +
                           std::to_string(fire_at) +
                           ", now=" + std::to_string(now_) + ")");
  }
  auto rec = std::make_shared<EventRecord>();
  rec->fire_at = fire_at;
  rec->seq = next_seq_++;
  rec->handler = std::move(fn);
  queue_.push(rec);
  ++stats_.scheduled;
  return EventHandle(rec);
}

bool SimKernel::cancel(const EventHandle& h) {
  auto rec = h.rec_.lock();
  if (!rec || rec->fired || rec->cancelled) return false;
  rec->cancelled = true;
  rec->handler = nullptr;
  ++stats_.cancelled;
  return true;
}

SimTime SimKernel::run_until_idle(SimTime limit) {
  while (!queue_.empty()) {
    auto rec = queue_.top();
    if (rec->cancelled) {
      queue_.pop();
      continue;
    }
    if (rec->fire_at > limit) {
      now_ = limit;
      return now_;
    }
    queue_.pop();
    now_ = rec->fire_at;
    rec->fired = true;
    ++stats_.fired;
    Handler fn = std::move(rec->handler);
    fn();
  }
  return now_;
}

}  // namespace gossipsim
