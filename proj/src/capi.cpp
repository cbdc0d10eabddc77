// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// extern "C" surface over the core. Exceptions stop here: every failure
// becomes a status code plus a thread-local message.

#include "wafmodel.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "core/corpus.hpp"
#include "core/engine.hpp"
#include "core/gateway.hpp"
#include "core/model.hpp"

#include <json.hpp>

using namespace waf;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message)
{
    g_last_error = message;
}

char* dup_cstr(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) return nullptr;
    std::memcpy(out, s.data(), s.size());
    out[s.size()] = '\0';
    return out;
}

std::optional<std::string> slurp(const char* path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

struct wafm_model {
    std::shared_ptr<const ModelSet> set;
};

struct wafm_store {
    SessionStore store;
};

struct wafm_corpus {
    std::ifstream file;
    std::unique_ptr<CorpusReader> reader;
};

struct wafm_gateway {
    std::unique_ptr<Gateway> gateway;
    std::shared_ptr<const ModelSet> model; // keeps the model alive while serving
};

extern "C" {

const char* wafm_version(void)
{
    return "0.1.0";
}

const char* wafm_last_error(void)
{
    return g_last_error.c_str();
}

void wafm_string_free(char* s)
{
    std::free(s);
}

int wafm_model_load_str(const char* json, size_t len, wafm_model** out)
{
    if (!json || !out) {
        set_error("null argument");
        return WAFM_EINVAL;
    }
    try {
        auto set = std::make_shared<ModelSet>(load_model(std::string(json, len)));
        *out = new wafm_model{std::move(set)};
        return WAFM_OK;
    } catch (const ModelValidationError& e) {
        std::string all;
        for (const auto& d : e.defects) {
            if (!all.empty()) all += "; ";
            all += d;
        }
        set_error(all);
        return WAFM_EMODEL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return WAFM_EMODEL;
    }
}

int wafm_model_load_file(const char* path, wafm_model** out)
{
    if (!path || !out) {
        set_error("null argument");
        return WAFM_EINVAL;
    }
    auto text = slurp(path);
    if (!text) {
        set_error(std::string("cannot read ") + path);
        return WAFM_EIO;
    }
    return wafm_model_load_str(text->data(), text->size(), out);
}

int wafm_model_save(const wafm_model* model, char** out_json)
{
    if (!model || !out_json) {
        set_error("null argument");
        return WAFM_EINVAL;
    }
    *out_json = dup_cstr(save_model(*model->set));
    return *out_json ? WAFM_OK : WAFM_EIO;
}

int wafm_model_check_str(const char* json, size_t len, char** out_report_json)
{
    if (!json || !out_report_json) {
        set_error("null argument");
        return WAFM_EINVAL;
    }
    try {
        auto defects = check_model_text(std::string(json, len));
        nlohmann::ordered_json report;
        report["defects"] = defects;
        report["ok"] = defects.empty();
        *out_report_json = dup_cstr(report.dump(2));
        return WAFM_OK;
    } catch (const std::exception& e) {
        set_error(e.what());
        return WAFM_EMODEL;
    }
}

int wafm_model_check_file(const char* path, char** out_report_json)
{
    if (!path || !out_report_json) {
        set_error("null argument");
        return WAFM_EINVAL;
    }
    auto text = slurp(path);
    if (!text) {
        set_error(std::string("cannot read ") + path);
        return WAFM_EIO;
    }
    return wafm_model_check_str(text->data(), text->size(), out_report_json);
}

void wafm_model_free(wafm_model* model)
{
    delete model;
}

wafm_store* wafm_store_new(void)
{
    return new wafm_store{};
}

void wafm_store_free(wafm_store* store)
{
    delete store;
}

int wafm_corpus_open(const char* path, wafm_corpus** out)
{
    if (!path || !out) {
        set_error("null argument");
        return WAFM_EINVAL;
    }
    auto corpus = std::make_unique<wafm_corpus>();
    corpus->file.open(path, std::ios::binary);
    if (!corpus->file) {
        set_error(std::string("cannot open ") + path);
        return WAFM_EIO;
    }
    corpus->reader = std::make_unique<CorpusReader>(corpus->file);
    *out = corpus.release();
    return WAFM_OK;
}

int wafm_corpus_next(wafm_corpus* corpus, char** out_exchange_json)
{
    if (!corpus || !out_exchange_json) {
        set_error("null argument");
        return WAFM_EINVAL;
    }
    try {
        auto exchange = corpus->reader->next();
        if (!exchange) return WAFM_EOF;
        *out_exchange_json = dup_cstr(exchange_to_json_line(*exchange));
        return *out_exchange_json ? WAFM_OK : WAFM_EIO;
    } catch (const CorpusFormatError& e) {
        set_error(e.what());
        return WAFM_ECORPUS;
    }
}

void wafm_corpus_free(wafm_corpus* corpus)
{
    delete corpus;
}

int wafm_har_to_corpus(const char* har_json, size_t len, char** out_jsonl)
{
    if (!har_json || !out_jsonl) {
        set_error("null argument");
        return WAFM_EINVAL;
    }
    try {
        auto exchanges = har_to_exchanges(std::string(har_json, len));
        std::string out;
        for (const auto& x : exchanges)
            out += exchange_to_json_line(x) + "\n";
        *out_jsonl = dup_cstr(out);
        return *out_jsonl ? WAFM_OK : WAFM_EIO;
    } catch (const CorpusFormatError& e) {
        set_error(e.what());
        return WAFM_ECORPUS;
    }
}

int wafm_evaluate(const wafm_model* model, wafm_store* store, const char* exchange_json,
                  size_t len, char** out_verdict_json)
{
    if (!model || !store || !exchange_json || !out_verdict_json) {
        set_error("null argument");
        return WAFM_EINVAL;
    }
    try {
        RawExchange exchange =
            exchange_from_json_line(std::string(exchange_json, len), 0);
        Verdict verdict = evaluate(*model->set, exchange, store->store);
        *out_verdict_json = dup_cstr(verdict.to_json_line());
        return *out_verdict_json ? WAFM_OK : WAFM_EIO;
    } catch (const CorpusFormatError& e) {
        set_error(e.what());
        return WAFM_ECORPUS;
    } catch (const std::exception& e) {
        set_error(e.what());
        return WAFM_ESTATE;
    }
}

int wafm_explain(const wafm_model* model, const uint8_t* request, size_t len,
                 char** out_text)
{
    if (!model || !request || !out_text) {
        set_error("null argument");
        return WAFM_EINVAL;
    }
    std::string text =
        explain(*model->set, Bytes(reinterpret_cast<const char*>(request), len));
    *out_text = dup_cstr(text);
    return *out_text ? WAFM_OK : WAFM_EIO;
}

int wafm_learn_params(const wafm_model* model, const char* corpus_path,
                      wafm_model** out_model, char** out_report_json)
{
    if (!model || !corpus_path || !out_model || !out_report_json) {
        set_error("null argument");
        return WAFM_EINVAL;
    }
    std::ifstream in(corpus_path, std::ios::binary);
    if (!in) {
        set_error(std::string("cannot open ") + corpus_path);
        return WAFM_EIO;
    }
    try {
        std::vector<RawExchange> corpus = read_corpus(in);
        LearnOutcome outcome = learn_params(*model->set, corpus);
        *out_model = new wafm_model{
            std::make_shared<ModelSet>(std::move(outcome.model))};
        *out_report_json = dup_cstr(outcome.report.to_json());
        return WAFM_OK;
    } catch (const CorpusFormatError& e) {
        set_error(e.what());
        return WAFM_ECORPUS;
    } catch (const std::exception& e) {
        set_error(e.what());
        return WAFM_ESTATE;
    }
}

int wafm_gateway_start(const wafm_model* model, wafm_store* store,
                       const char* config_json, wafm_gateway** out)
{
    if (!model || !config_json || !out) {
        set_error("null argument");
        return WAFM_EINVAL;
    }
    GatewayConfig config;
    try {
        auto j = nlohmann::json::parse(config_json);
        config.listen_address = j.value("listen_address", config.listen_address);
        config.listen_port = j.value("listen_port", config.listen_port);
        if (j.contains("upstreams")) {
            for (auto it = j["upstreams"].begin(); it != j["upstreams"].end(); ++it) {
                std::string hostport = it.value().get<std::string>();
                size_t colon = hostport.rfind(':');
                if (colon == std::string::npos) {
                    set_error("upstream '" + hostport + "' must be host:port");
                    return WAFM_EINVAL;
                }
                config.upstreams[it.key()] = {hostport.substr(0, colon),
                                              std::stoi(hostport.substr(colon + 1))};
            }
        }
        config.block_status = j.value("block_status", config.block_status);
        config.block_body_template =
            j.value("block_body_template", config.block_body_template);
        config.connect_timeout_ms = j.value("connect_timeout_ms", config.connect_timeout_ms);
        config.read_timeout_ms = j.value("read_timeout_ms", config.read_timeout_ms);
        config.write_timeout_ms = j.value("write_timeout_ms", config.write_timeout_ms);
        config.response_buffer_cap =
            j.value("response_buffer_cap", config.response_buffer_cap);
        config.log_path = j.value("log_path", config.log_path);
    } catch (const std::exception& e) {
        set_error(std::string("bad gateway config: ") + e.what());
        return WAFM_EINVAL;
    }

    try {
        auto holder = std::make_unique<wafm_gateway>();
        holder->model = model->set;
        holder->gateway = std::make_unique<Gateway>(holder->model, std::move(config),
                                                    store ? &store->store : nullptr);
        holder->gateway->start();
        *out = holder.release();
        return WAFM_OK;
    } catch (const std::exception& e) {
        set_error(e.what());
        return WAFM_ESTATE;
    }
}

int wafm_gateway_port(const wafm_gateway* gateway)
{
    return gateway ? gateway->gateway->port() : -1;
}

int wafm_gateway_wait(wafm_gateway* gateway)
{
    if (!gateway) {
        set_error("null argument");
        return WAFM_EINVAL;
    }
    gateway->gateway->wait();
    return WAFM_OK;
}

int wafm_gateway_stop(wafm_gateway* gateway)
{
    if (!gateway) {
        set_error("null argument");
        return WAFM_EINVAL;
    }
    gateway->gateway->stop();
    return WAFM_OK;
}

void wafm_gateway_free(wafm_gateway* gateway)
{
    delete gateway;
}

} // extern "C"
