/// @file broadcaster.cpp

#include "pitchgate/service/broadcaster.hpp"

#include <algorithm>

namespace pitchgate::service {

ClientQueue::ClientQueue(std::size_t capacity, std::size_t hard_limit)
    : capacity_(std::max<std::size_t>(capacity, 1)), hard_limit_(std::max(hard_limit, capacity)) {}

void ClientQueue::push(const Encoded& msg) {
  std::function<void()> notify;
  {
    std::lock_guard lock(mutex_);
    if (closed_) return;
    if (queue_.size() >= capacity_) {
      auto oldest = std::find_if(queue_.begin(), queue_.end(),
                                 [](const Encoded& e) { return e.type == MessageType::Snapshot; });
      if (oldest != queue_.end()) {
        queue_.erase(oldest);
        ++dropped_;
      } else if (msg.type == MessageType::Snapshot) {
        ++dropped_;
        return;
      } else if (queue_.size() >= hard_limit_) {
        overflowed_ = true;
        closed_ = true;
        cv_.notify_all();
        return;
      }
    }
    queue_.push_back(msg);
    notify = notify_;
  }
  cv_.notify_one();
  if (notify) notify();
}

std::optional<Encoded> ClientQueue::pop(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  cv_.wait_for(lock, timeout, [this] { return !queue_.empty() || closed_; });
  if (queue_.empty()) return std::nullopt;
  Encoded e = std::move(queue_.front());
  queue_.pop_front();
  return e;
}

std::optional<Encoded> ClientQueue::try_pop() {
  std::lock_guard lock(mutex_);
  if (queue_.empty()) return std::nullopt;
  Encoded e = std::move(queue_.front());
  queue_.pop_front();
  return e;
}

void ClientQueue::close() {
  std::function<void()> notify;
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
    notify = notify_;
  }
  cv_.notify_all();
  if (notify) notify();
}

void ClientQueue::set_notify(std::function<void()> fn) {
  std::lock_guard lock(mutex_);
  notify_ = std::move(fn);
}

std::size_t ClientQueue::dropped_snapshots() const {
  std::lock_guard lock(mutex_);
  return dropped_;
}

bool ClientQueue::overflowed() const {
  std::lock_guard lock(mutex_);
  return overflowed_;
}

bool ClientQueue::closed() const {
  std::lock_guard lock(mutex_);
  return closed_;
}

std::size_t ClientQueue::size() const {
  std::lock_guard lock(mutex_);
  return queue_.size();
}

Broadcaster::Broadcaster(std::size_t capacity, std::size_t hard_limit)
    : capacity_(capacity), hard_limit_(hard_limit) {}

std::shared_ptr<ClientQueue> Broadcaster::subscribe() {
  auto q = std::make_shared<ClientQueue>(capacity_, hard_limit_);
  std::lock_guard lock(mutex_);
  if (closed_) {
    q->close();
  } else {
    clients_.push_back(q);
  }
  return q;
}

void Broadcaster::unsubscribe(const std::shared_ptr<ClientQueue>& q) {
  std::lock_guard lock(mutex_);
  clients_.erase(std::remove(clients_.begin(), clients_.end(), q), clients_.end());
}

void Broadcaster::publish(const WireMessage& msg) {
  Encoded e{msg.type(), std::make_shared<const std::string>(encode(msg))};
  std::vector<std::shared_ptr<ClientQueue>> targets;
  {
    std::lock_guard lock(mutex_);
    targets = clients_;
  }
  for (auto& q : targets) q->push(e);
}

void Broadcaster::close() {
  std::vector<std::shared_ptr<ClientQueue>> targets;
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
    targets.swap(clients_);
  }
  for (auto& q : targets) q->close();
}

std::size_t Broadcaster::subscriber_count() const {
  std::lock_guard lock(mutex_);
  return clients_.size();
}

}  // namespace pitchgate::service
