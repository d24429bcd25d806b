// Copyright 2026 The diqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef DIQKD_PROTOCOL_TRANSPORT_HPP_
#define DIQKD_PROTOCOL_TRANSPORT_HPP_

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <cstring>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "diqkd/errors.hpp"
#include "diqkd/protocol/frame.hpp"

namespace diqkd {

using Millis = std::chrono::milliseconds;

// Reliable, ordered, duplex. receive() blocks up to the transport's timeout.
// All failures surface as ChannelError.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void send(const MessageFrame& frame) = 0;
  virtual MessageFrame receive() = 0;
  virtual void close() = 0;
};

namespace detail {

struct WirePipe {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::vector<std::uint8_t>> queue;
  bool closed = false;
};

}  // namespace detail

// One end of an in-process duplex queue. Frames cross as wire bytes.
class InprocTransport : public Transport {
 public:
  InprocTransport(std::shared_ptr<detail::WirePipe> out, std::shared_ptr<detail::WirePipe> in,
                  Millis timeout)
      : out_(std::move(out)), in_(std::move(in)), timeout_(timeout) {}
  ~InprocTransport() override { close(); }

  void send(const MessageFrame& frame) override {
    auto wire = encode_frame(frame);
    {
      std::lock_guard lk(out_->mu);
      if (out_->closed) throw ChannelError("send on closed channel");
      out_->queue.push_back(std::move(wire));
    }
    out_->cv.notify_one();
  }

  MessageFrame receive() override {
    std::unique_lock lk(in_->mu);
    if (!in_->cv.wait_for(lk, timeout_, [&] { return !in_->queue.empty() || in_->closed; })) {
      throw ChannelError("receive timed out");
    }
    if (in_->queue.empty()) throw ChannelError("peer closed the channel");
    auto wire = std::move(in_->queue.front());
    in_->queue.pop_front();
    lk.unlock();
    return decode_frame(wire);
  }

  void close() override {
    {
      std::lock_guard lk(out_->mu);
      out_->closed = true;
    }
    out_->cv.notify_all();
  }

 private:
  std::shared_ptr<detail::WirePipe> out_, in_;
  Millis timeout_;
};

inline std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> make_inproc_pair(
    Millis timeout = Millis(60000)) {
  auto ab = std::make_shared<detail::WirePipe>();
  auto ba = std::make_shared<detail::WirePipe>();
  return {std::make_unique<InprocTransport>(ab, ba, timeout),
          std::make_unique<InprocTransport>(ba, ab, timeout)};
}

// Loopback TCP. One party listens, the other connects.
class TcpTransport : public Transport {
 public:
  TcpTransport(int fd, Millis timeout) : fd_(fd), timeout_(timeout) {
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }
  ~TcpTransport() override { close(); }
  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;

  void send(const MessageFrame& frame) override {
    const auto wire = encode_frame(frame);
    std::size_t off = 0;
    while (off < wire.size()) {
      if (fd_ < 0) throw ChannelError("send on closed socket");
      const auto r = ::send(fd_, wire.data() + off, wire.size() - off, MSG_NOSIGNAL);
      if (r < 0) {
        if (errno == EINTR) continue;
        throw ChannelError(std::string("send failed: ") + std::strerror(errno));
      }
      off += static_cast<std::size_t>(r);
    }
  }

  MessageFrame receive() override {
    std::uint8_t hdr[kFrameHeaderBytes];
    read_exact(hdr, sizeof(hdr));
    const auto h = decode_header(hdr);
    MessageFrame f;
    f.type = h.type;
    f.payload.resize(h.length);
    read_exact(f.payload.data(), h.length);
    return f;
  }

  void close() override {
    if (fd_ >= 0) {
      ::shutdown(fd_, SHUT_RDWR);
      ::close(fd_);
      fd_ = -1;
    }
  }

 private:
  void read_exact(std::uint8_t* dst, std::size_t len) {
    std::size_t got = 0;
    while (got < len) {
      if (fd_ < 0) throw ChannelError("receive on closed socket");
      pollfd p{fd_, POLLIN, 0};
      const int pr = ::poll(&p, 1, static_cast<int>(timeout_.count()));
      if (pr == 0) throw ChannelError("receive timed out");
      if (pr < 0) {
        if (errno == EINTR) continue;
        throw ChannelError(std::string("poll failed: ") + std::strerror(errno));
      }
      const auto r = ::recv(fd_, dst + got, len - got, 0);
      if (r == 0) throw ChannelError("peer closed the connection");
      if (r < 0) {
        if (errno == EINTR) continue;
        throw ChannelError(std::string("recv failed: ") + std::strerror(errno));
      }
      got += static_cast<std::size_t>(r);
    }
  }

  int fd_;
  Millis timeout_;
};

struct SocketAddress {
  std::string host;
  std::uint16_t port;
};

// "host:port"; the host may be empty for the listening side.
inline SocketAddress parse_address(std::string_view addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string_view::npos) throw ChannelError("address must be host:port");
  const std::string port_s(addr.substr(colon + 1));
  char* end = nullptr;
  const long port = std::strtol(port_s.c_str(), &end, 10);
  if (port_s.empty() || *end != '\0' || port < 1 || port > 65535) {
    throw ChannelError("bad port in address " + std::string(addr));
  }
  std::string host(addr.substr(0, colon));
  if (host.empty()) host = "127.0.0.1";
  return {host, static_cast<std::uint16_t>(port)};
}

namespace detail {

inline sockaddr_in resolve_ipv4(const SocketAddress& a) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(a.host.c_str(), nullptr, &hints, &res) != 0 || !res) {
    throw ChannelError("cannot resolve " + a.host);
  }
  sockaddr_in sa{};
  std::memcpy(&sa, res->ai_addr, sizeof(sa));
  ::freeaddrinfo(res);
  sa.sin_port = htons(a.port);
  return sa;
}

}  // namespace detail

class TcpListener {
 public:
  TcpListener(const SocketAddress& addr, Millis timeout) : timeout_(timeout) {
    const auto sa = detail::resolve_ipv4(addr);
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw ChannelError("socket() failed");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(fd_, reinterpret_cast<const sockaddr*>(&sa), sizeof(sa)) != 0 ||
        ::listen(fd_, 4) != 0) {
      const std::string why = std::strerror(errno);
      ::close(fd_);
      throw ChannelError("cannot listen on " + addr.host + ":" + std::to_string(addr.port) +
                         ": " + why);
    }
  }
  ~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
  }
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::unique_ptr<Transport> accept() {
    pollfd p{fd_, POLLIN, 0};
    const int pr = ::poll(&p, 1, static_cast<int>(timeout_.count()));
    if (pr <= 0) throw ChannelError("no peer connected before timeout");
    const int c = ::accept(fd_, nullptr, nullptr);
    if (c < 0) throw ChannelError(std::string("accept failed: ") + std::strerror(errno));
    return std::make_unique<TcpTransport>(c, timeout_);
  }

 private:
  int fd_ = -1;
  Millis timeout_;
};

// Retries until the listener is up or the timeout passes.
inline std::unique_ptr<Transport> tcp_connect(const SocketAddress& addr, Millis timeout) {
  const auto sa = detail::resolve_ipv4(addr);
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) throw ChannelError("socket() failed");
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&sa), sizeof(sa)) == 0) {
      return std::make_unique<TcpTransport>(fd, timeout);
    }
    ::close(fd);
    if (std::chrono::steady_clock::now() >= deadline) {
      throw ChannelError("cannot connect to " + addr.host + ":" + std::to_string(addr.port));
    }
    std::this_thread::sleep_for(Millis(50));
  }
}

// Exchanges session tokens; both ends must agree.
inline void handshake(Transport& t, std::string_view token) {
  t.send({MsgType::kHello, std::vector<std::uint8_t>(token.begin(), token.end())});
  const auto f = t.receive();
  if (f.type != MsgType::kHello) throw ChannelError("expected HELLO");
  if (std::string_view(reinterpret_cast<const char*>(f.payload.data()), f.payload.size()) !=
      token) {
    throw ChannelError("session token mismatch");
  }
}

// "flip-<frame>-bit:K" or "drop-<frame>"; applies to the first such frame sent.
struct FaultSpec {
  enum class Kind { kFlipBit, kDrop } kind = Kind::kDrop;
  MsgType target = MsgType::kSyndrome;
  std::uint64_t bit = 0;

  static FaultSpec parse(std::string_view spec) {
    FaultSpec f;
    auto bad = [&] { return DomainError("bad fault spec '" + std::string(spec) + "'"); };
    std::string_view name;
    if (spec.starts_with("drop-")) {
      f.kind = Kind::kDrop;
      name = spec.substr(5);
    } else if (spec.starts_with("flip-")) {
      f.kind = Kind::kFlipBit;
      const auto pos = spec.rfind("-bit:");
      if (pos == std::string_view::npos || pos < 5) throw bad();
      name = spec.substr(5, pos - 5);
      const std::string num(spec.substr(pos + 5));
      char* end = nullptr;
      f.bit = std::strtoull(num.c_str(), &end, 10);
      if (num.empty() || *end != '\0') throw bad();
    } else {
      throw bad();
    }
    const auto t = msg_type_from_name(name);
    if (!t || !is_protocol_message(*t)) throw bad();
    f.target = *t;
    return f;
  }
};

// Sender-side fault injection over another transport.
class FaultyTransport : public Transport {
 public:
  FaultyTransport(std::unique_ptr<Transport> inner, FaultSpec spec)
      : inner_(std::move(inner)), spec_(spec) {}

  void send(const MessageFrame& frame) override {
    if (fired_ || frame.type != spec_.target) return inner_->send(frame);
    fired_ = true;
    if (spec_.kind == FaultSpec::Kind::kDrop) return;
    MessageFrame f = frame;
    if (!f.payload.empty()) {
      const std::uint64_t b = spec_.bit % (f.payload.size() * 8);
      f.payload[b / 8] ^= static_cast<std::uint8_t>(1u << (b % 8));
    }
    inner_->send(f);
  }
  MessageFrame receive() override { return inner_->receive(); }
  void close() override { inner_->close(); }
  bool fired() const { return fired_; }

 private:
  std::unique_ptr<Transport> inner_;
  FaultSpec spec_;
  bool fired_ = false;
};

}  // namespace diqkd

#endif  // DIQKD_PROTOCOL_TRANSPORT_HPP_
