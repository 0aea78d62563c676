#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pcadmm/wire.hpp"

namespace pcadmm {

struct TimeoutError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// First-order link cost: a fixed per-frame term plus a size-proportional
// term. Only the simulated carrier applies it; TCP links have the real thing.
struct LatencyModel {
  double base_ms = 0.0;
  double per_mib_ms = 0.0;
  double delay_ms(size_t bytes) const {
    return base_ms + per_mib_ms * ((double)bytes / (1024.0 * 1024.0));
  }
};

struct LinkStat {
  u64 frames = 0;
  u64 bytes = 0;
};

struct MessageRecord {
  int from = 0, to = 0;
  MsgType type = MsgType::shutdown;
  u32 iteration = 0;
  size_t bytes = 0;
  double at_s = 0.0;  // stamped by the log: seconds since it was created
};

// Traffic accounting, attached to a carrier. Digest mode keeps totals and
// per-link counters; full mode additionally retains every record (for the
// message-count assertions and traffic dumps).
class MessageLog {
public:
  explicit MessageLog(bool keep_records = false)
      : keep_(keep_records), epoch_(std::chrono::steady_clock::now()) {}
  void note(const MessageRecord& r);
  u64 total_frames() const;
  u64 total_bytes() const;
  LinkStat link(int from, int to) const;
  std::vector<MessageRecord> records() const;  // empty in digest mode

private:
  mutable std::mutex mu_;
  bool keep_;
  std::chrono::steady_clock::time_point epoch_;
  u64 frames_ = 0, bytes_ = 0;
  std::map<std::pair<int, int>, LinkStat> links_;
  std::vector<MessageRecord> recs_;
};

// Point-to-point frame passing between numbered endpoints (0 is the master,
// 1..K the edges). Frames are the encoded envelopes, length prefix included.
// recv blocks for the addressed link only and throws TimeoutError when the
// wait expires.
class Carrier {
public:
  virtual ~Carrier() = default;
  virtual void send(int from, int to, std::vector<uint8_t> frame) = 0;
  virtual std::vector<uint8_t> recv(int to, int from, double timeout_s) = 0;
  void attach_log(MessageLog* log) { log_ = log; }

protected:
  void note_frame(int from, int to, const std::vector<uint8_t>& frame);
  MessageLog* log_ = nullptr;
};

// In-process carrier: one FIFO per directed link, delivery times stamped
// from the latency model (FIFO order is enforced even when a small frame
// would otherwise overtake a large one).
class SimCarrier : public Carrier {
public:
  explicit SimCarrier(int endpoints, LatencyModel latency = {});
  void send(int from, int to, std::vector<uint8_t> frame) override;
  std::vector<uint8_t> recv(int to, int from, double timeout_s) override;

private:
  using Clock = std::chrono::steady_clock;
  struct Item {
    std::vector<uint8_t> frame;
    Clock::time_point at;
  };
  struct Link {
    std::deque<Item> q;
    Clock::time_point last_at{};
  };
  void check_id(int id) const;

  int n_;
  LatencyModel latency_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::map<std::pair<int, int>, Link> links_;
};

// Real sockets over 127.0.0.1, star topology: one TCP connection per edge,
// both directions on it. Exists so the protocol is exercised against actual
// kernel buffering and framing, not just in-process queues.
class TcpCarrier : public Carrier {
public:
  static std::unique_ptr<TcpCarrier> loopback(int edges);
  ~TcpCarrier() override;
  TcpCarrier(const TcpCarrier&) = delete;
  TcpCarrier& operator=(const TcpCarrier&) = delete;

  void send(int from, int to, std::vector<uint8_t> frame) override;
  std::vector<uint8_t> recv(int to, int from, double timeout_s) override;

private:
  TcpCarrier() = default;
  int link_fd(int a, int b) const;  // the socket for the (master, edge) pair

  std::vector<int> master_fds_;  // index: edge id - 1
  std::vector<int> edge_fds_;
  std::unique_ptr<std::mutex[]> write_mu_;  // per connection, per direction
};

}  // namespace pcadmm
