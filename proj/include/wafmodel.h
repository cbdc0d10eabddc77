/*
 * Copyright 2026 The wafmodel Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API for the wafmodel engine. Opaque handles, integer status codes,
 * strings owned by the library and released with wafm_string_free().
 * On any non-zero status, wafm_last_error() returns a thread-local message.
 */

#ifndef WAFMODEL_H
#define WAFMODEL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef WAFM_API
#define WAFM_API __attribute__((visibility("default")))
#endif

typedef struct wafm_model wafm_model;     /* immutable model set */
typedef struct wafm_store wafm_store;     /* session state store */
typedef struct wafm_corpus wafm_corpus;   /* streaming corpus reader */
typedef struct wafm_gateway wafm_gateway; /* running reverse proxy */

enum wafm_status {
    WAFM_OK = 0,
    WAFM_EOF = 1,     /* corpus exhausted */
    WAFM_EINVAL = 2,  /* bad argument */
    WAFM_EPARSE = 3,  /* malformed input (request / JSON) */
    WAFM_EMODEL = 4,  /* model failed validation */
    WAFM_ECORPUS = 5, /* corpus record rejected */
    WAFM_EIO = 6,     /* file/socket trouble */
    WAFM_ESTATE = 7   /* operation not valid in this state */
};

WAFM_API const char* wafm_version(void);

/* Thread-local message for the most recent failure on this thread. */
WAFM_API const char* wafm_last_error(void);

WAFM_API void wafm_string_free(char* s);

/* ---- models ---- */

WAFM_API int wafm_model_load_file(const char* path, wafm_model** out);
WAFM_API int wafm_model_load_str(const char* json, size_t len, wafm_model** out);
/* Canonical serialization of the model. */
WAFM_API int wafm_model_save(const wafm_model* model, char** out_json);
/* Validates without loading; *out_report_json lists defects (empty array = clean). */
WAFM_API int wafm_model_check_str(const char* json, size_t len, char** out_report_json);
WAFM_API int wafm_model_check_file(const char* path, char** out_report_json);
WAFM_API void wafm_model_free(wafm_model* model);

/* ---- session stores ---- */

WAFM_API wafm_store* wafm_store_new(void);
WAFM_API void wafm_store_free(wafm_store* store);

/* ---- corpora ---- */

WAFM_API int wafm_corpus_open(const char* path, wafm_corpus** out);
/* WAFM_OK and one exchange JSON object per call; WAFM_EOF at the end. */
WAFM_API int wafm_corpus_next(wafm_corpus* corpus, char** out_exchange_json);
WAFM_API void wafm_corpus_free(wafm_corpus* corpus);

/* Converts a HAR 1.2 document to corpus JSONL. */
WAFM_API int wafm_har_to_corpus(const char* har_json, size_t len, char** out_jsonl);

/* ---- evaluation ---- */

/* exchange_json: one corpus record. *out_verdict_json: the verdict object. */
WAFM_API int wafm_evaluate(const wafm_model* model, wafm_store* store,
                           const char* exchange_json, size_t len,
                           char** out_verdict_json);

/* Parse-tree render, routing trace and parameter verdicts for one raw request. */
WAFM_API int wafm_explain(const wafm_model* model, const uint8_t* request, size_t len,
                          char** out_text);

/* Learns parameter models from the corpus at path. Returns the new model and
 * a JSON learning report. */
WAFM_API int wafm_learn_params(const wafm_model* model, const char* corpus_path,
                               wafm_model** out_model, char** out_report_json);

/* ---- gateway ---- */

/* config_json:
 * {"listen_address": "127.0.0.1", "listen_port": 0,
 *  "upstreams": {"app": "127.0.0.1:9000"},
 *  "block_status": 403, "block_body_template": "...",
 *  "connect_timeout_ms": 5000, "read_timeout_ms": 10000,
 *  "write_timeout_ms": 10000, "response_buffer_cap": 1048576,
 *  "log_path": "verdicts.jsonl"}
 * The model must stay alive until the gateway is freed. */
WAFM_API int wafm_gateway_start(const wafm_model* model, wafm_store* store,
                                const char* config_json, wafm_gateway** out);
WAFM_API int wafm_gateway_port(const wafm_gateway* gateway);
/* Blocks until the gateway stops (wafm_gateway_stop from another thread). */
WAFM_API int wafm_gateway_wait(wafm_gateway* gateway);
WAFM_API int wafm_gateway_stop(wafm_gateway* gateway);
WAFM_API void wafm_gateway_free(wafm_gateway* gateway);

#ifdef __cplusplus
}
#endif

#endif /* WAFMODEL_H */
