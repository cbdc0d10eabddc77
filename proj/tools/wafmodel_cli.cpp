// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// wafmodel command line: validate traffic against a model, learn parameter
// models from a corpus, explain a single request, check a model file, import
// HAR captures, and serve as an inline reverse proxy. Everything goes through
// the public C API in wafmodel.h.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wafmodel.h"

namespace {

// exit codes: 0 clean, 1 violations/defects found, 2 error
constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitError = 2;

int fail(const std::string& context)
{
    std::cerr << "error: " << context << ": " << wafm_last_error() << "\n";
    return kExitError;
}

std::string take_string(char* owned)
{
    std::string out = owned ? owned : "";
    wafm_string_free(owned);
    return out;
}

bool read_file(const std::string& path, std::string& out)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

struct ModelHandle {
    wafm_model* model = nullptr;
    ~ModelHandle() { wafm_model_free(model); }
};

struct StoreHandle {
    wafm_store* store = wafm_store_new();
    ~StoreHandle() { wafm_store_free(store); }
};

int cmd_validate(const std::string& model_path, const std::string& corpus_path,
                 const std::string& verdicts_path)
{
    ModelHandle model;
    if (wafm_model_load_file(model_path.c_str(), &model.model) != WAFM_OK)
        return fail("loading model");
    StoreHandle store;

    wafm_corpus* corpus = nullptr;
    if (wafm_corpus_open(corpus_path.c_str(), &corpus) != WAFM_OK)
        return fail("opening corpus");

    std::ofstream verdicts_out;
    if (!verdicts_path.empty()) {
        verdicts_out.open(verdicts_path, std::ios::binary);
        if (!verdicts_out) {
            std::cerr << "error: cannot write " << verdicts_path << "\n";
            wafm_corpus_free(corpus);
            return kExitError;
        }
    }

    size_t exchanges = 0, flagged = 0, blocked = 0;
    std::map<std::string, size_t> by_layer;
    for (;;) {
        char* exchange_json = nullptr;
        int rc = wafm_corpus_next(corpus, &exchange_json);
        if (rc == WAFM_EOF) break;
        if (rc != WAFM_OK) {
            wafm_corpus_free(corpus);
            return fail("reading corpus");
        }
        std::string exchange = take_string(exchange_json);
        char* verdict_json = nullptr;
        if (wafm_evaluate(model.model, store.store, exchange.c_str(), exchange.size(),
                          &verdict_json) != WAFM_OK) {
            wafm_corpus_free(corpus);
            return fail("evaluating exchange");
        }
        std::string verdict = take_string(verdict_json);
        if (verdicts_out.is_open()) verdicts_out << verdict << "\n";

        ++exchanges;
        auto parsed = nlohmann::json::parse(verdict);
        if (!parsed["violations"].empty()) {
            ++flagged;
            for (const auto& v : parsed["violations"])
                ++by_layer[v["layer"].get<std::string>()];
        }
        if (parsed["decision"] == "block") ++blocked;
    }
    wafm_corpus_free(corpus);

    std::cerr << exchanges << " exchanges, " << flagged << " with violations, " << blocked
              << " blocked\n";
    for (const auto& [layer, count] : by_layer)
        std::cerr << "  " << layer << ": " << count << "\n";
    return flagged == 0 ? kExitClean : kExitFindings;
}

int cmd_learn(const std::string& model_path, const std::string& corpus_path,
              const std::string& out_path)
{
    ModelHandle model;
    if (wafm_model_load_file(model_path.c_str(), &model.model) != WAFM_OK)
        return fail("loading model");

    wafm_model* learned = nullptr;
    char* report = nullptr;
    if (wafm_learn_params(model.model, corpus_path.c_str(), &learned, &report) != WAFM_OK)
        return fail("learning parameters");
    ModelHandle learned_handle{learned};

    char* json = nullptr;
    if (wafm_model_save(learned, &json) != WAFM_OK) return fail("saving model");
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitError;
    }
    out << take_string(json);
    std::cout << take_string(report) << "\n";
    return kExitClean;
}

int cmd_explain(const std::string& model_path, const std::string& request_path)
{
    ModelHandle model;
    if (wafm_model_load_file(model_path.c_str(), &model.model) != WAFM_OK)
        return fail("loading model");
    std::string request;
    if (!read_file(request_path, request)) {
        std::cerr << "error: cannot read " << request_path << "\n";
        return kExitError;
    }
    char* text = nullptr;
    if (wafm_explain(model.model, reinterpret_cast<const uint8_t*>(request.data()),
                     request.size(), &text) != WAFM_OK)
        return fail("explaining request");
    std::cout << take_string(text);
    return kExitClean;
}

int cmd_check(const std::string& model_path)
{
    char* report_json = nullptr;
    if (wafm_model_check_file(model_path.c_str(), &report_json) != WAFM_OK)
        return fail("checking model");
    auto report = nlohmann::json::parse(take_string(report_json));
    if (report["ok"].get<bool>()) {
        std::cout << "model ok\n";
        return kExitClean;
    }
    for (const auto& d : report["defects"])
        std::cout << "defect: " << d.get<std::string>() << "\n";
    return kExitFindings;
}

int cmd_import_har(const std::string& har_path, const std::string& out_path)
{
    std::string har;
    if (!read_file(har_path, har)) {
        std::cerr << "error: cannot read " << har_path << "\n";
        return kExitError;
    }
    char* jsonl = nullptr;
    if (wafm_har_to_corpus(har.c_str(), har.size(), &jsonl) != WAFM_OK)
        return fail("converting HAR");
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitError;
    }
    out << take_string(jsonl);
    return kExitClean;
}

wafm_gateway* g_gateway = nullptr;

void handle_signal(int)
{
    if (g_gateway) wafm_gateway_stop(g_gateway);
}

int cmd_serve(const std::string& model_path, const std::string& listen,
              const std::vector<std::string>& upstreams, int block_status,
              const std::string& log_path)
{
    ModelHandle model;
    if (wafm_model_load_file(model_path.c_str(), &model.model) != WAFM_OK)
        return fail("loading model");

    std::string address = "0.0.0.0";
    int port = 8080;
    size_t colon = listen.rfind(':');
    if (colon == std::string::npos) {
        std::cerr << "error: --listen must look like host:port or :port\n";
        return kExitError;
    }
    if (colon > 0) address = listen.substr(0, colon);
    port = std::atoi(listen.c_str() + colon + 1);

    nlohmann::json config;
    config["listen_address"] = address;
    config["listen_port"] = port;
    config["block_status"] = block_status;
    if (!log_path.empty()) config["log_path"] = log_path;
    nlohmann::json ups = nlohmann::json::object();
    for (const auto& u : upstreams) {
        size_t eq = u.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error: --upstream must look like app=host:port\n";
            return kExitError;
        }
        ups[u.substr(0, eq)] = u.substr(eq + 1);
    }
    config["upstreams"] = std::move(ups);

    StoreHandle store;
    std::string config_text = config.dump();
    if (wafm_gateway_start(model.model, store.store, config_text.c_str(), &g_gateway) !=
        WAFM_OK)
        return fail("starting gateway");
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    std::cerr << "listening on " << address << ":" << wafm_gateway_port(g_gateway) << "\n";
    wafm_gateway_wait(g_gateway);
    wafm_gateway_free(g_gateway);
    g_gateway = nullptr;
    return kExitClean;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"model-driven web application firewall engine"};
    app.require_subcommand(1);

    std::string model_path, corpus_path, verdicts_path, out_path, request_path, har_path;
    std::string listen = ":8080", log_path;
    std::vector<std::string> upstreams;
    int block_status = 403;

    auto* validate = app.add_subcommand("validate", "evaluate a corpus against a model");
    validate->add_option("--model", model_path, "model file")->required();
    validate->add_option("--corpus", corpus_path, "corpus JSONL")->required();
    validate->add_option("--verdicts", verdicts_path, "write verdict JSONL here");

    auto* learn = app.add_subcommand("learn-params", "fit parameter models from a corpus");
    learn->add_option("--model", model_path, "model file")->required();
    learn->add_option("--corpus", corpus_path, "corpus JSONL")->required();
    learn->add_option("--out", out_path, "output model file")->required();

    auto* explain = app.add_subcommand("explain", "diagnose one raw request");
    explain->add_option("--model", model_path, "model file")->required();
    explain->add_option("--request", request_path, "raw request bytes")->required();

    auto* check = app.add_subcommand("check-model", "validate a model file");
    check->add_option("model", model_path, "model file")->required();

    auto* import_har = app.add_subcommand("import-har", "convert a HAR capture to a corpus");
    import_har->add_option("--har", har_path, "HAR file")->required();
    import_har->add_option("--out", out_path, "output corpus JSONL")->required();

    auto* serve = app.add_subcommand("serve", "run the inline reverse proxy");
    serve->add_option("--model", model_path, "model file")->required();
    serve->add_option("--listen", listen, "listen address, host:port or :port");
    serve->add_option("--upstream", upstreams, "app=host:port (repeatable)")->required();
    serve->add_option("--block-status", block_status, "HTTP status for blocked requests");
    serve->add_option("--log", log_path, "verdict log file (default stderr)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(model_path, corpus_path, verdicts_path);
        if (learn->parsed()) return cmd_learn(model_path, corpus_path, out_path);
        if (explain->parsed()) return cmd_explain(model_path, request_path);
        if (check->parsed()) return cmd_check(model_path);
        if (import_har->parsed()) return cmd_import_har(har_path, out_path);
        if (serve->parsed())
            return cmd_serve(model_path, listen, upstreams, block_status, log_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
