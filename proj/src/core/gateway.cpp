// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/gateway.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <iostream>

namespace waf {

namespace {

constexpr size_t kMaxHeaderBytes = 1 << 20;
constexpr size_t kMaxRequestBytes = 16u << 20;

std::string now_iso8601()
{
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

bool send_all(int fd, std::string_view data, int timeout_ms)
{
    size_t sent = 0;
    while (sent < data.size()) {
        struct pollfd pfd{fd, POLLOUT, 0};
        int rc = ::poll(&pfd, 1, timeout_ms);
        if (rc <= 0) return false;
        ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) return false;
        sent += static_cast<size_t>(n);
    }
    return true;
}

// -1 on error/timeout, 0 on orderly close
ssize_t recv_some(int fd, std::string& buffer, int timeout_ms)
{
    struct pollfd pfd{fd, POLLIN, 0};
    int rc = ::poll(&pfd, 1, timeout_ms);
    if (rc <= 0) return -1;
    char chunk[16384];
    ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n > 0) buffer.append(chunk, static_cast<size_t>(n));
    return n;
}

// Light framing scan: byte count of one complete request in the buffer, or
// nullopt when more bytes are needed. The strict parser has the final word;
// this only decides how much to read.
std::optional<size_t> request_complete(const std::string& buffer)
{
    size_t header_end = buffer.find("\r\n\r\n");
    if (header_end == std::string::npos) return std::nullopt;
    size_t body_start = header_end + 4;

    std::optional<uint64_t> content_length;
    bool chunked = false;
    size_t pos = 0;
    while (pos < header_end) {
        size_t nl = buffer.find("\r\n", pos);
        if (nl == std::string::npos || nl > header_end) nl = header_end;
        std::string_view line(buffer.data() + pos, nl - pos);
        size_t colon = line.find(':');
        if (colon != std::string_view::npos) {
            std::string_view name = line.substr(0, colon);
            std::string_view value = line.substr(colon + 1);
            while (!value.empty() && (value.front() == ' ' || value.front() == '\t'))
                value.remove_prefix(1);
            while (!value.empty() && (value.back() == ' ' || value.back() == '\t'))
                value.remove_suffix(1);
            if (ascii_iequals(name, "content-length") && !content_length) {
                uint64_t cl = 0;
                bool ok = !value.empty();
                for (char c : value) {
                    if (c < '0' || c > '9') { ok = false; break; }
                    cl = cl * 10 + static_cast<uint64_t>(c - '0');
                    if (cl > kMaxRequestBytes) { ok = false; break; }
                }
                if (ok) content_length = cl;
            } else if (ascii_iequals(name, "transfer-encoding")) {
                chunked = true;
            }
        }
        pos = nl + 2;
    }

    if (chunked) {
        size_t p = body_start;
        for (;;) {
            size_t nl = buffer.find("\r\n", p);
            if (nl == std::string::npos) return std::nullopt;
            uint64_t size = 0;
            for (size_t k = p; k < nl; ++k) {
                char c = buffer[k];
                int v = (c >= '0' && c <= '9')   ? c - '0'
                        : (c >= 'a' && c <= 'f') ? c - 'a' + 10
                        : (c >= 'A' && c <= 'F') ? c - 'A' + 10
                                                 : -1;
                if (v < 0) return buffer.size() ? std::optional<size_t>(buffer.size())
                                                : std::nullopt; // garbage: hand to parser
                size = size * 16 + static_cast<uint64_t>(v);
            }
            p = nl + 2;
            if (size == 0) {
                if (p + 2 > buffer.size()) return std::nullopt;
                return p + 2;
            }
            if (p + size + 2 > buffer.size()) return std::nullopt;
            p += size + 2;
        }
    }
    if (content_length) {
        size_t total = body_start + static_cast<size_t>(*content_length);
        if (buffer.size() < total) return std::nullopt;
        return total;
    }
    return body_start;
}

std::string simple_response(int status, const std::string& reason, const std::string& body)
{
    std::string out = "HTTP/1.1 " + std::to_string(status) + " " + reason + "\r\n";
    out += "Content-Type: text/plain\r\n";
    out += "Content-Length: " + std::to_string(body.size()) + "\r\n";
    out += "Connection: close\r\n\r\n";
    out += body;
    return out;
}

std::string replace_placeholder(std::string text, const std::string& placeholder,
                                const std::string& value)
{
    size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
    return text;
}

int connect_upstream(const std::string& host, int port, int timeout_ms)
{
    struct addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    struct addrinfo* res = nullptr;
    if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0)
        return -1;
    int fd = -1;
    for (struct addrinfo* ai = res; ai; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_NONBLOCK, ai->ai_protocol);
        if (fd < 0) continue;
        int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
        if (rc == 0) break;
        if (errno == EINPROGRESS) {
            struct pollfd pfd{fd, POLLOUT, 0};
            if (::poll(&pfd, 1, timeout_ms) == 1) {
                int err = 0;
                socklen_t len = sizeof(err);
                if (::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len) == 0 && err == 0)
                    break;
            }
        }
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    return fd;
}

// Designated session attribute from the raw envelope, cookie locators from
// the Cookie header, tree locators from the bootstrap tree.
std::string session_client_id(const AppModel& app, const HttpEnvelope& env,
                              const std::string& peer)
{
    if (app.session_key_attribute.empty()) return peer;
    for (const auto& def : app.attributes) {
        if (def.name != app.session_key_attribute || !def.verify_rule) continue;
        const RequestLocator& loc = def.verify_rule->locator;
        if (loc.kind == RequestLocator::Kind::cookie) {
            for (auto header : env.headers.get_all("cookie"))
                for (auto& [name, value] : parse_cookie_header(header))
                    if (name == loc.name && !value.empty()) return value;
        } else {
            ParseTree tree = bootstrap_tree(env);
            if (auto value = loc.extract(tree); value && !value->empty()) return *value;
        }
    }
    return peer;
}

} // namespace

Gateway::Gateway(std::shared_ptr<const ModelSet> modelset, GatewayConfig config,
                 SessionStore* external_store)
    : modelset_(std::move(modelset)), config_(std::move(config)),
      store_(external_store ? external_store : &owned_store_)
{
}

Gateway::~Gateway()
{
    stop();
}

void Gateway::start()
{
    for (const auto& app : modelset_->apps)
        if (!config_.upstreams.count(app.app_id))
            throw std::runtime_error("no upstream configured for app '" + app.app_id + "'");
    if (config_.connect_timeout_ms <= 0 || config_.read_timeout_ms <= 0 ||
        config_.write_timeout_ms <= 0)
        throw std::runtime_error("timeouts must be positive");

    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw std::runtime_error("socket() failed");
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    struct sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(config_.listen_port));
    if (config_.listen_address.empty() || config_.listen_address == "0.0.0.0") {
        addr.sin_addr.s_addr = INADDR_ANY;
    } else if (::inet_pton(AF_INET, config_.listen_address.c_str(), &addr.sin_addr) != 1) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw std::runtime_error("bad listen address '" + config_.listen_address + "'");
    }
    if (::bind(listen_fd_, reinterpret_cast<struct sockaddr*>(&addr), sizeof(addr)) < 0 ||
        ::listen(listen_fd_, 64) < 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw std::runtime_error("cannot bind " + config_.listen_address + ":" +
                                 std::to_string(config_.listen_port));
    }
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd_, reinterpret_cast<struct sockaddr*>(&addr), &len);
    bound_port_ = ntohs(addr.sin_port);

    running_ = true;
    accept_thread_ = std::thread([this] { accept_loop(); });
}

void Gateway::stop()
{
    bool was_running = running_.exchange(false);
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    if (accept_thread_.joinable()) accept_thread_.join();
    std::vector<std::thread> conns;
    {
        std::lock_guard<std::mutex> lock(conn_mu_);
        conns.swap(connections_);
    }
    for (auto& t : conns)
        if (t.joinable()) t.join();
    if (was_running) wait_cv_.notify_all();
}

void Gateway::wait()
{
    std::unique_lock<std::mutex> lock(wait_mu_);
    wait_cv_.wait(lock, [this] { return !running_.load(); });
}

void Gateway::accept_loop()
{
    while (running_) {
        struct sockaddr_in peer_addr{};
        socklen_t len = sizeof(peer_addr);
        int fd = ::accept(listen_fd_, reinterpret_cast<struct sockaddr*>(&peer_addr), &len);
        if (fd < 0) {
            if (!running_) break;
            continue;
        }
        char ip[INET_ADDRSTRLEN] = "0.0.0.0";
        ::inet_ntop(AF_INET, &peer_addr.sin_addr, ip, sizeof(ip));
        std::string peer = ip;
        std::lock_guard<std::mutex> lock(conn_mu_);
        connections_.emplace_back([this, fd, peer] { handle_connection(fd, peer); });
    }
}

void Gateway::log_verdict(const Verdict& verdict)
{
    std::lock_guard<std::mutex> lock(log_mu_);
    if (config_.log_path.empty()) {
        std::cerr << verdict.to_json_line() << "\n";
    } else {
        std::ofstream out(config_.log_path, std::ios::app);
        out << verdict.to_json_line() << "\n";
    }
}

void Gateway::handle_connection(int client_fd, const std::string& peer)
{
    std::string buffer;
    std::optional<size_t> total;
    while (running_) {
        total = request_complete(buffer);
        if (total) break;
        if (buffer.size() > kMaxRequestBytes) break;
        size_t header_probe = buffer.find("\r\n\r\n");
        if (header_probe == std::string::npos && buffer.size() > kMaxHeaderBytes) break;
        ssize_t n = recv_some(client_fd, buffer, config_.read_timeout_ms);
        if (n <= 0) break;
    }
    if (!total) {
        if (!buffer.empty())
            send_all(client_fd, simple_response(400, "Bad Request", "incomplete request\n"),
                     config_.write_timeout_ms);
        ::close(client_fd);
        return;
    }

    ++exchanges_;
    RawExchange exchange;
    exchange.id = "g-" + std::to_string(next_id_.fetch_add(1));
    exchange.client_id = peer;
    exchange.ts = now_iso8601();
    exchange.request_bytes = buffer.substr(0, *total);

    PreparedExchange prepared = prepare_exchange(*modelset_, exchange);
    if (!prepared.envelope_ok) {
        // fail closed: unparseable input is never forwarded
        prepared.verdict.decision = decide(prepared.verdict.violations, modelset_->policy);
        log_verdict(prepared.verdict);
        ++blocked_;
        send_all(client_fd,
                 simple_response(400, "Bad Request",
                                 "rejected: " + prepared.verdict.violations.front().detail +
                                     "\n"),
                 config_.write_timeout_ms);
        ::close(client_fd);
        return;
    }

    if (!prepared.app) {
        prepared.verdict.decision = decide(prepared.verdict.violations, modelset_->policy);
        log_verdict(prepared.verdict);
        if (prepared.verdict.decision == Decision::block) {
            ++blocked_;
            std::string body = replace_placeholder(config_.block_body_template,
                                                   "{violation_id}", exchange.id);
            send_all(client_fd,
                     simple_response(config_.block_status, "Forbidden", body),
                     config_.write_timeout_ms);
        } else {
            send_all(client_fd, simple_response(502, "Bad Gateway", "no upstream\n"),
                     config_.write_timeout_ms);
        }
        ::close(client_fd);
        return;
    }

    const AppModel& app = *prepared.app;
    exchange.client_id = session_client_id(app, prepared.envelope, peer);

    auto entry = store_->acquire(app.app_id + "|" + exchange.client_id);
    std::lock_guard<std::mutex> session_lock(entry->mu);

    evaluate_request_phase(app, prepared.envelope, entry->state, prepared.verdict,
                           registry_);
    prepared.verdict.decision = decide(prepared.verdict.violations, modelset_->policy);
    log_verdict(prepared.verdict);

    if (prepared.verdict.decision == Decision::block) {
        ++blocked_;
        std::string body =
            replace_placeholder(config_.block_body_template, "{violation_id}", exchange.id);
        send_all(client_fd, simple_response(config_.block_status, "Forbidden", body),
                 config_.write_timeout_ms);
        ::close(client_fd);
        return;
    }

    auto up = config_.upstreams.find(app.app_id);
    int upstream_fd = up == config_.upstreams.end()
                          ? -1
                          : connect_upstream(up->second.first, up->second.second,
                                             config_.connect_timeout_ms);
    if (upstream_fd < 0) {
        send_all(client_fd, simple_response(502, "Bad Gateway", "upstream unreachable\n"),
                 config_.write_timeout_ms);
        ::close(client_fd);
        return;
    }

    // the upstream sees exactly what the model evaluated
    Bytes forwarded = serialize_envelope(prepared.envelope);
    if (!send_all(upstream_fd, forwarded, config_.write_timeout_ms)) {
        ::close(upstream_fd);
        send_all(client_fd, simple_response(502, "Bad Gateway", "upstream write failed\n"),
                 config_.write_timeout_ms);
        ::close(client_fd);
        return;
    }
    ::shutdown(upstream_fd, SHUT_WR);

    std::string response_bytes;
    std::optional<ResponseRecord> record;
    bool oversized = false;
    for (;;) {
        size_t consumed = 0;
        try {
            if (auto rec = parse_response(response_bytes, false, &consumed)) {
                record = std::move(rec);
                break;
            }
        } catch (const MalformedRequest&) {
            break; // relay whatever the upstream said, skip bookkeeping
        }
        if (response_bytes.size() > config_.response_buffer_cap) {
            oversized = true;
            break;
        }
        ssize_t n = recv_some(upstream_fd, response_bytes, config_.read_timeout_ms);
        if (n < 0) break;
        if (n == 0) {
            size_t c2 = 0;
            try {
                if (auto rec = parse_response(response_bytes, true, &c2))
                    record = std::move(rec);
            } catch (const MalformedRequest&) {
            }
            break;
        }
    }

    if (response_bytes.empty()) {
        ::close(upstream_fd);
        send_all(client_fd, simple_response(502, "Bad Gateway", "empty upstream response\n"),
                 config_.write_timeout_ms);
        ::close(client_fd);
        return;
    }

    // relay verbatim; with an oversized body keep pumping bytes through
    send_all(client_fd, response_bytes, config_.write_timeout_ms);
    if (oversized) {
        std::string spill;
        for (;;) {
            spill.clear();
            ssize_t n = recv_some(upstream_fd, spill, config_.read_timeout_ms);
            if (n <= 0) break;
            if (!send_all(client_fd, spill, config_.write_timeout_ms)) break;
        }
        std::lock_guard<std::mutex> lock(log_mu_);
        std::cerr << "{\"warning\":\"response exceeded buffer cap; extraction skipped\","
                     "\"exchange_id\":\""
                  << exchange.id << "\"}\n";
    }
    ::close(upstream_fd);

    if (record) {
        apply_response_phase(app, prepared.envelope, prepared.host, prepared.port,
                             prepared.verdict.action ? prepared.verdict.action->action
                                                     : std::string(),
                             *record, entry->state, registry_);
        // a fresh designated session value keys this state from now on
        if (!app.session_key_attribute.empty()) {
            auto it = entry->state.attrs.find(app.session_key_attribute);
            if (it != entry->state.attrs.end())
                for (const auto& value : it->second.values())
                    store_->alias(app.app_id + "|" + value, entry);
        }
    }
    ::close(client_fd);
}

} // namespace waf
