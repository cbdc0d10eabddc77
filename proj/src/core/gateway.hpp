// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Inline reverse proxy: evaluate the request, block it or forward the
// re-serialized envelope upstream, relay the response verbatim, and feed the
// response to the attribute/access-control bookkeeping. Fail closed: a
// request the strict parser rejects never reaches the upstream.

#ifndef WAFMODEL_CORE_GATEWAY_HPP
#define WAFMODEL_CORE_GATEWAY_HPP

#include <atomic>
#include <condition_variable>
#include <map>
#include <memory>
#include <thread>

#include "core/engine.hpp"

namespace waf {

struct GatewayConfig {
    std::string listen_address = "127.0.0.1";
    int listen_port = 0; // 0 = ephemeral, read back via Gateway::port()
    std::map<std::string, std::pair<std::string, int>> upstreams; // app_id -> host,port
    int block_status = 403;
    std::string block_body_template =
        "{\"blocked\": true, \"violation_id\": \"{violation_id}\"}\n";
    int connect_timeout_ms = 5000;
    int read_timeout_ms = 10000;
    int write_timeout_ms = 10000;
    size_t response_buffer_cap = 1 << 20; // larger bodies relay without extraction
    std::string log_path; // verdict log sink, empty = stderr
};

class Gateway {
public:
    // external_store may be null; the gateway then keeps its own.
    Gateway(std::shared_ptr<const ModelSet> modelset, GatewayConfig config,
            SessionStore* external_store = nullptr);
    ~Gateway();

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    // Binds and starts serving. Throws std::runtime_error on bad config
    // (modeled app without an upstream, unbindable address).
    void start();
    void stop();
    void wait(); // blocks until stop() is called
    int port() const { return bound_port_; }

    // counters for tests and operators
    size_t exchanges_seen() const { return exchanges_.load(); }
    size_t exchanges_blocked() const { return blocked_.load(); }

private:
    void accept_loop();
    void handle_connection(int fd, const std::string& peer);
    void log_verdict(const Verdict& verdict);

    std::shared_ptr<const ModelSet> modelset_;
    GatewayConfig config_;
    DecoderRegistry registry_ = DecoderRegistry::built_in();
    SessionStore owned_store_;
    SessionStore* store_;

    int listen_fd_ = -1;
    int bound_port_ = 0;
    std::atomic<bool> running_{false};
    std::atomic<uint64_t> next_id_{1};
    std::atomic<size_t> exchanges_{0};
    std::atomic<size_t> blocked_{0};
    std::thread accept_thread_;
    std::mutex conn_mu_;
    std::vector<std::thread> connections_;
    std::mutex log_mu_;
    std::mutex wait_mu_;
    std::condition_variable wait_cv_;
};

} // namespace waf

#endif
