#include "pcadmm/transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace pcadmm {

void MessageLog::note(const MessageRecord& r) {
  std::lock_guard<std::mutex> lk(mu_);
  frames_++;
  bytes_ += r.bytes;
  LinkStat& l = links_[{r.from, r.to}];
  l.frames++;
  l.bytes += r.bytes;
  if (keep_) {
    recs_.push_back(r);
    recs_.back().at_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_)
            .count();
  }
}

u64 MessageLog::total_frames() const {
  std::lock_guard<std::mutex> lk(mu_);
  return frames_;
}

u64 MessageLog::total_bytes() const {
  std::lock_guard<std::mutex> lk(mu_);
  return bytes_;
}

LinkStat MessageLog::link(int from, int to) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = links_.find({from, to});
  return it == links_.end() ? LinkStat{} : it->second;
}

std::vector<MessageRecord> MessageLog::records() const {
  std::lock_guard<std::mutex> lk(mu_);
  return recs_;
}

void Carrier::note_frame(int from, int to, const std::vector<uint8_t>& frame) {
  if (!log_) return;
  MessageRecord r;
  r.from = from;
  r.to = to;
  r.bytes = frame.size();
  if (frame.size() >= 11) {  // enough header to read type and iteration
    r.type = (MsgType)frame[4];
    r.iteration = ((u32)frame[7] << 24) | ((u32)frame[8] << 16) |
                  ((u32)frame[9] << 8) | (u32)frame[10];
  }
  log_->note(r);
}

SimCarrier::SimCarrier(int endpoints, LatencyModel latency)
    : n_(endpoints), latency_(latency) {
  if (endpoints < 2) throw std::invalid_argument("need at least two endpoints");
}

void SimCarrier::check_id(int id) const {
  if (id < 0 || id >= n_) throw std::logic_error("no such endpoint");
}

void SimCarrier::send(int from, int to, std::vector<uint8_t> frame) {
  check_id(from);
  check_id(to);
  if (from == to) throw std::logic_error("self link");
  note_frame(from, to, frame);
  auto at = Clock::now() +
            std::chrono::duration_cast<Clock::duration>(
                std::chrono::duration<double, std::milli>(
                    latency_.delay_ms(frame.size())));
  std::lock_guard<std::mutex> lk(mu_);
  Link& l = links_[{from, to}];
  if (at < l.last_at) at = l.last_at;  // keep the link strictly FIFO
  l.last_at = at;
  l.q.push_back(Item{std::move(frame), at});
  cv_.notify_all();
}

std::vector<uint8_t> SimCarrier::recv(int to, int from, double timeout_s) {
  check_id(to);
  check_id(from);
  auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(timeout_s));
  std::unique_lock<std::mutex> lk(mu_);
  while (true) {
    Link& l = links_[{from, to}];
    auto now = Clock::now();
    if (!l.q.empty() && l.q.front().at <= now) {
      std::vector<uint8_t> frame = std::move(l.q.front().frame);
      l.q.pop_front();
      return frame;
    }
    if (now >= deadline) throw TimeoutError("recv timed out");
    auto wake = deadline;
    if (!l.q.empty() && l.q.front().at < wake) wake = l.q.front().at;
    cv_.wait_until(lk, wake);
  }
}

static void set_nodelay(int fd) {
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

std::unique_ptr<TcpCarrier> TcpCarrier::loopback(int edges) {
  if (edges < 1) throw std::invalid_argument("need at least one edge");
  std::unique_ptr<TcpCarrier> c(new TcpCarrier());

  int lfd = socket(AF_INET, SOCK_STREAM, 0);
  if (lfd < 0) throw std::runtime_error("socket() failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;  // ephemeral
  if (bind(lfd, (sockaddr*)&addr, sizeof addr) < 0 || listen(lfd, edges) < 0) {
    close(lfd);
    throw std::runtime_error("listen on loopback failed");
  }
  socklen_t alen = sizeof addr;
  getsockname(lfd, (sockaddr*)&addr, &alen);

  for (int e = 0; e < edges; e++) {
    int cfd = socket(AF_INET, SOCK_STREAM, 0);
    if (cfd < 0 || connect(cfd, (sockaddr*)&addr, sizeof addr) < 0) {
      close(lfd);
      throw std::runtime_error("loopback connect failed");
    }
    int afd = accept(lfd, nullptr, nullptr);
    if (afd < 0) {
      close(cfd);
      close(lfd);
      throw std::runtime_error("loopback accept failed");
    }
    set_nodelay(cfd);
    set_nodelay(afd);
    c->edge_fds_.push_back(cfd);
    c->master_fds_.push_back(afd);
  }
  close(lfd);
  c->write_mu_ = std::make_unique<std::mutex[]>((size_t)edges * 2);
  return c;
}

TcpCarrier::~TcpCarrier() {
  for (int fd : master_fds_) close(fd);
  for (int fd : edge_fds_) close(fd);
}

// The socket the acting endpoint holds for the (master, edge) pair.
int TcpCarrier::link_fd(int actor, int peer) const {
  int edges = (int)master_fds_.size();
  if (actor == 0) {
    if (peer < 1 || peer > edges) throw std::logic_error("no such link");
    return master_fds_[peer - 1];
  }
  if (peer != 0 || actor < 1 || actor > edges)
    throw std::logic_error("no such link");
  return edge_fds_[actor - 1];
}

void TcpCarrier::send(int from, int to, std::vector<uint8_t> frame) {
  int fd = link_fd(from, to);
  note_frame(from, to, frame);
  int edge = from == 0 ? to : from;
  std::lock_guard<std::mutex> lk(
      write_mu_[(size_t)(edge - 1) * 2 + (from == 0 ? 0 : 1)]);
  size_t sent = 0;
  while (sent < frame.size()) {
    ssize_t k =
        ::send(fd, frame.data() + sent, frame.size() - sent, MSG_NOSIGNAL);
    if (k < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("tcp send failed");
    }
    sent += (size_t)k;
  }
}

std::vector<uint8_t> TcpCarrier::recv(int to, int from, double timeout_s) {
  int fd = link_fd(to, from);
  auto deadline =
      std::chrono::steady_clock::now() +
      std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(timeout_s));

  auto read_n = [&](uint8_t* dst, size_t n) {
    size_t got = 0;
    while (got < n) {
      double remain = std::chrono::duration<double>(
                          deadline - std::chrono::steady_clock::now())
                          .count();
      if (remain <= 0.0) throw TimeoutError("recv timed out");
      timeval tv{};
      tv.tv_sec = (time_t)remain;
      tv.tv_usec = (suseconds_t)((remain - (double)tv.tv_sec) * 1e6);
      if (tv.tv_sec == 0 && tv.tv_usec == 0) tv.tv_usec = 1000;
      setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
      ssize_t k = ::recv(fd, dst + got, n - got, 0);
      if (k == 0) throw std::runtime_error("connection closed");
      if (k < 0) {
        if (errno == EINTR) continue;
        if (errno == EAGAIN || errno == EWOULDBLOCK)
          throw TimeoutError("recv timed out");
        throw std::runtime_error("tcp recv failed");
      }
      got += (size_t)k;
    }
  };

  uint8_t hdr[4];
  read_n(hdr, 4);
  u32 body = ((u32)hdr[0] << 24) | ((u32)hdr[1] << 16) | ((u32)hdr[2] << 8) |
             (u32)hdr[3];
  if (body > kFrameCap) throw std::runtime_error("frame past the size cap");
  std::vector<uint8_t> frame(4 + (size_t)body);
  std::memcpy(frame.data(), hdr, 4);
  read_n(frame.data() + 4, body);
  return frame;
}

}  // namespace pcadmm
