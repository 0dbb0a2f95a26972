#include "clakap/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/time.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "clakap/error.hpp"
#include "clakap/hex.hpp"
#include "clakap/wire.hpp"

namespace clakap {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw Error(Errc::transport, what + ": " + std::strerror(errno));
}

class Socket {
 public:
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket() {
    if (fd_ >= 0) ::close(fd_);
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const { return fd_; }

  void set_timeout(std::chrono::milliseconds timeout) {
    timeval tv{};
    tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
    tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
    if (::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv) != 0 ||
        ::setsockopt(fd_, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv) != 0) {
      fail("setsockopt");
    }
  }

  void write_all(std::span<const std::uint8_t> bytes) {
    while (!bytes.empty()) {
      const ssize_t n = ::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        fail("send");
      }
      bytes = bytes.subspan(static_cast<std::size_t>(n));
    }
  }

  void read_exact(std::vector<std::uint8_t>& buf, std::size_t count) {
    const std::size_t start = buf.size();
    buf.resize(start + count);
    std::size_t got = 0;
    while (got < count) {
      const ssize_t n = ::recv(fd_, buf.data() + start + got, count - got, 0);
      if (n == 0) throw Error(Errc::transport, "peer closed the connection mid-frame");
      if (n < 0) {
        if (errno == EINTR) continue;
        fail("recv");
      }
      got += static_cast<std::size_t>(n);
    }
  }

  std::vector<std::uint8_t> read_frame(const Curve& curve) {
    std::vector<std::uint8_t> buf;
    read_exact(buf, 3);
    const std::size_t id_length = (std::size_t{buf[1]} << 8) | buf[2];
    read_exact(buf, id_length + 1);
    read_exact(buf, frame_length(buf, curve) - buf.size());
    return buf;
  }

 private:
  int fd_;
};

struct AddrInfo {
  addrinfo* head = nullptr;
  ~AddrInfo() {
    if (head) ::freeaddrinfo(head);
  }
};

AddrInfo resolve(const Endpoint& endpoint, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  AddrInfo out;
  const std::string port = std::to_string(endpoint.port);
  const char* host = endpoint.host.empty() ? nullptr : endpoint.host.c_str();
  if (const int rc = ::getaddrinfo(host, port.c_str(), &hints, &out.head); rc != 0) {
    throw Error(Errc::transport, "cannot resolve " + endpoint.str() + ": " + ::gai_strerror(rc));
  }
  return out;
}

KaMessage expect(const std::vector<std::uint8_t>& frame, const Curve& curve, MsgType type) {
  const WireMessage wire = decode_msg(frame, curve);
  if (wire.type != type) {
    throw Error(Errc::bad_type, "expected message type " + std::to_string(static_cast<int>(type)));
  }
  return wire.message;
}

}  // namespace

Endpoint Endpoint::parse(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) throw Error(Errc::transport, "endpoint must be host:port");
  std::string_view host = text.substr(0, colon);
  const std::string_view port_text = text.substr(colon + 1);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  if (port_text.empty() || port_text.size() > 5 || port_text.find_first_not_of("0123456789") != std::string_view::npos) {
    throw Error(Errc::transport, "bad port in endpoint '" + std::string(text) + "'");
  }
  const unsigned long port = std::stoul(std::string(port_text));
  if (port > 65535) throw Error(Errc::transport, "port out of range");
  return Endpoint{std::string(host), static_cast<std::uint16_t>(port)};
}

std::string Endpoint::str() const {
  if (host.find(':') != std::string::npos) return "[" + host + "]:" + std::to_string(port);
  return host + ":" + std::to_string(port);
}

std::vector<std::string> describe_transcript(const Curve& curve, const SessionTranscript& transcript) {
  return {
      "ID_A " + transcript.initiator.str(),
      "ID_B " + transcript.responder.str(),
      "T_A " + hex_encode(curve.encode(transcript.t_initiator)),
      "T_B " + hex_encode(curve.encode(transcript.t_responder)),
  };
}

Listener::Listener(const Endpoint& endpoint) {
  const AddrInfo info = resolve(endpoint, true);
  for (addrinfo* ai = info.head; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    const int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 1) == 0) {
      fd_ = fd;
      break;
    }
    ::close(fd);
  }
  if (fd_ < 0) fail("cannot listen on " + endpoint.str());

  sockaddr_storage addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len) != 0) fail("getsockname");
  if (addr.ss_family == AF_INET) {
    port_ = ntohs(reinterpret_cast<const sockaddr_in*>(&addr)->sin_port);
  } else {
    port_ = ntohs(reinterpret_cast<const sockaddr_in6*>(&addr)->sin6_port);
  }
}

Listener::~Listener() {
  if (fd_ >= 0) ::close(fd_);
}

AgreementResult Listener::accept_and_respond(const AgreementMaterial& material, RandomSource& rng,
                                             std::chrono::milliseconds timeout) {
  int fd = -1;
  do {
    fd = ::accept(fd_, nullptr, nullptr);
  } while (fd < 0 && errno == EINTR);
  if (fd < 0) fail("accept");
  Socket conn(fd);
  conn.set_timeout(timeout);

  const Curve& curve = material.params.group();
  std::vector<std::string> log;
  std::vector<std::uint8_t> m1_frame = conn.read_frame(curve);
  log.push_back("recv M1 " + hex_encode(m1_frame));
  const KaMessage m1 = expect(m1_frame, curve, MsgType::m1);

  auto [session, m2] = respond(material.params, material.own, material.peer, m1, rng);
  std::vector<std::uint8_t> m2_frame = encode_msg(curve, m2, MsgType::m2);
  conn.write_all(m2_frame);
  log.push_back("send M2 " + hex_encode(m2_frame));

  return AgreementResult{Role::responder, *session.key(), *session.transcript(), std::move(m1_frame),
                         std::move(m2_frame), std::move(log)};
}

AgreementResult connect_and_initiate(const Endpoint& endpoint, const AgreementMaterial& material, RandomSource& rng,
                                     std::chrono::milliseconds timeout) {
  const AddrInfo info = resolve(endpoint, false);
  int fd = -1;
  int last_errno = 0;
  for (addrinfo* ai = info.head; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    last_errno = errno;
    ::close(fd);
    fd = -1;
  }
  if (fd < 0) {
    errno = last_errno;
    fail("cannot connect to " + endpoint.str());
  }
  Socket conn(fd);
  conn.set_timeout(timeout);

  const Curve& curve = material.params.group();
  std::vector<std::string> log;
  auto [session, m1] = initiate(material.params, material.own, material.peer, rng);
  std::vector<std::uint8_t> m1_frame = encode_msg(curve, m1, MsgType::m1);
  conn.write_all(m1_frame);
  log.push_back("send M1 " + hex_encode(m1_frame));

  std::vector<std::uint8_t> m2_frame = conn.read_frame(curve);
  log.push_back("recv M2 " + hex_encode(m2_frame));
  const SessionKey key = session.finalize(expect(m2_frame, curve, MsgType::m2));
  return AgreementResult{Role::initiator, key, *session.transcript(), std::move(m1_frame), std::move(m2_frame),
                         std::move(log)};
}

AgreementResult agree_over_socket(Role role, const Endpoint& endpoint, const AgreementMaterial& material,
                                  RandomSource& rng, std::chrono::milliseconds timeout) {
  if (role == Role::initiator) return connect_and_initiate(endpoint, material, rng, timeout);
  Listener listener(endpoint);
  return listener.accept_and_respond(material, rng, timeout);
}

}  // namespace clakap
