/// @file broadcaster.hpp
/// @brief Fan-out of encoded wire messages to per-client bounded queues.
///
/// A slow client never blocks the publisher. When a queue is full the oldest
/// queued snapshot is dropped (or the incoming one, if none is queued). Other
/// message types are never dropped; a client whose backlog reaches the hard
/// limit is marked overflowed and should be disconnected.

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pitchgate/service/wire.hpp"

namespace pitchgate::service {

struct Encoded {
  MessageType type;
  std::shared_ptr<const std::string> text;
};

class ClientQueue {
 public:
  explicit ClientQueue(std::size_t capacity, std::size_t hard_limit);

  void push(const Encoded& msg);
  /// Waits up to @p timeout; nullopt on timeout or once closed and drained.
  std::optional<Encoded> pop(std::chrono::milliseconds timeout);
  /// Non-blocking pop.
  std::optional<Encoded> try_pop();
  void close();

  /// Called (outside the lock) after every successful push.
  void set_notify(std::function<void()> fn);

  std::size_t dropped_snapshots() const;
  bool overflowed() const;
  bool closed() const;
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<Encoded> queue_;
  std::size_t capacity_;
  std::size_t hard_limit_;
  std::size_t dropped_ = 0;
  bool overflowed_ = false;
  bool closed_ = false;
  std::function<void()> notify_;
};

class Broadcaster {
 public:
  explicit Broadcaster(std::size_t capacity = 1024, std::size_t hard_limit = 16384);

  std::shared_ptr<ClientQueue> subscribe();
  void unsubscribe(const std::shared_ptr<ClientQueue>& q);
  /// Encodes once and enqueues to every subscriber.
  void publish(const WireMessage& msg);
  /// Closes every queue; later subscribers start closed.
  void close();
  std::size_t subscriber_count() const;

 private:
  mutable std::mutex mutex_;
  std::vector<std::shared_ptr<ClientQueue>> clients_;
  std::size_t capacity_;
  std::size_t hard_limit_;
  bool closed_ = false;
};

}  // namespace pitchgate::service
