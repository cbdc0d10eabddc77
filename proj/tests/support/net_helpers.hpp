// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Tiny socket helpers for gateway tests: a scripted client that sends exact
// bytes, and a stub upstream that counts hits and replies with a fixed body.

#ifndef WAFMODEL_TESTS_NET_HELPERS_HPP
#define WAFMODEL_TESTS_NET_HELPERS_HPP

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

namespace test_net {

// Sends raw bytes to 127.0.0.1:port, half-closes, reads until EOF.
inline std::string roundtrip(int port, const std::string& bytes)
{
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) return {};
    struct sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(port));
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    if (::connect(fd, reinterpret_cast<struct sockaddr*>(&addr), sizeof(addr)) < 0) {
        ::close(fd);
        return {};
    }
    size_t sent = 0;
    while (sent < bytes.size()) {
        ssize_t n = ::send(fd, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) break;
        sent += static_cast<size_t>(n);
    }
    std::string out;
    char chunk[8192];
    for (;;) {
        ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
        if (n <= 0) break;
        out.append(chunk, static_cast<size_t>(n));
    }
    ::close(fd);
    return out;
}

// One-response-per-connection upstream. Records each received request.
class StubUpstream {
public:
    explicit StubUpstream(std::string response_body,
                          std::string content_type = "text/plain")
        : body_(std::move(response_body)), content_type_(std::move(content_type))
    {
        fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
        int one = 1;
        ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
        struct sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = 0;
        ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
        ::bind(fd_, reinterpret_cast<struct sockaddr*>(&addr), sizeof(addr));
        ::listen(fd_, 16);
        socklen_t len = sizeof(addr);
        ::getsockname(fd_, reinterpret_cast<struct sockaddr*>(&addr), &len);
        port_ = ntohs(addr.sin_port);
        running_ = true;
        thread_ = std::thread([this] { loop(); });
    }

    ~StubUpstream() { stop(); }

    void stop()
    {
        if (!running_.exchange(false)) return;
        ::shutdown(fd_, SHUT_RDWR);
        ::close(fd_);
        if (thread_.joinable()) thread_.join();
    }

    int port() const { return port_; }
    size_t hits() const { return hits_.load(); }
    std::vector<std::string> requests() const
    {
        std::lock_guard<std::mutex> lock(mu_);
        return requests_;
    }
    const std::string& body() const { return body_; }
    void set_extra_headers(std::vector<std::string> headers)
    {
        std::lock_guard<std::mutex> lock(mu_);
        extra_headers_ = std::move(headers);
    }

private:
    void loop()
    {
        while (running_) {
            int conn = ::accept(fd_, nullptr, nullptr);
            if (conn < 0) break;
            ++hits_;
            std::string request;
            char chunk[8192];
            // read until the peer half-closes (the gateway shuts down writes)
            for (;;) {
                ssize_t n = ::recv(conn, chunk, sizeof(chunk), 0);
                if (n <= 0) break;
                request.append(chunk, static_cast<size_t>(n));
                if (request.find("\r\n\r\n") != std::string::npos &&
                    request.find("Content-Length") == std::string::npos)
                    break;
                size_t head = request.find("\r\n\r\n");
                if (head != std::string::npos) {
                    size_t cl = request.find("Content-Length: ");
                    if (cl != std::string::npos && cl < head) {
                        size_t val = cl + 16;
                        size_t body_len = std::stoul(request.substr(val));
                        if (request.size() >= head + 4 + body_len) break;
                    }
                }
            }
            {
                std::lock_guard<std::mutex> lock(mu_);
                requests_.push_back(request);
            }
            std::string response = "HTTP/1.1 200 OK\r\nContent-Type: " + content_type_ +
                                   "\r\nContent-Length: " + std::to_string(body_.size()) +
                                   "\r\nConnection: close\r\n";
            {
                std::lock_guard<std::mutex> lock(mu_);
                for (const auto& h : extra_headers_) response += h + "\r\n";
            }
            response += "\r\n" + body_;
            size_t sent = 0;
            while (sent < response.size()) {
                ssize_t n = ::send(conn, response.data() + sent, response.size() - sent,
                                   MSG_NOSIGNAL);
                if (n <= 0) break;
                sent += static_cast<size_t>(n);
            }
            ::close(conn);
        }
    }

    int fd_ = -1;
    int port_ = 0;
    std::string body_;
    std::string content_type_;
    std::atomic<bool> running_{false};
    std::atomic<size_t> hits_{0};
    mutable std::mutex mu_;
    std::vector<std::string> requests_;
    std::vector<std::string> extra_headers_;
    std::thread thread_;
};

} // namespace test_net

#endif
