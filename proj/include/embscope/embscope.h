//------------------------------------------------------------------------------
//
//   Copyright 2026 The embscope Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#ifndef EMBSCOPE_EMBSCOPE_H
#define EMBSCOPE_EMBSCOPE_H

/*
 * C interface to the embscope engine.
 *
 * Objects are opaque handles created and destroyed through this API. Every
 * fallible call returns an embscope_status; on failure a message describing
 * the error is available from embscope_last_error() on the calling thread.
 * Strings returned through char** out-parameters are owned by the caller and
 * must be released with embscope_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EMBSCOPE_BUILDING)
#    define EMBSCOPE_API __declspec(dllexport)
#  else
#    define EMBSCOPE_API __declspec(dllimport)
#  endif
#else
#  define EMBSCOPE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum embscope_status
{
  EMBSCOPE_OK                   = 0,
  EMBSCOPE_ERR_INVALID_ARGUMENT = 1,
  EMBSCOPE_ERR_NOT_FOUND        = 2,
  EMBSCOPE_ERR_CONFLICT         = 3,
  EMBSCOPE_ERR_IO               = 4,
  EMBSCOPE_ERR_FORMAT           = 5,
  EMBSCOPE_ERR_DEGENERATE       = 6,
  EMBSCOPE_ERR_INTERNAL         = 7
} embscope_status;

typedef struct embscope_engine  embscope_engine;
typedef struct embscope_service embscope_service;

/* Receives one progress line (cache hits, recomputation) per call. */
typedef void (*embscope_log_fn)(const char *line, void *user_data);

typedef struct embscope_precompute_options
{
  uint32_t    k;       /* 0: use the manifest's k */
  const char *metric;  /* NULL: per-frame manifest metric; else "cosine" | "euclidean" */
  uint32_t    sample;  /* 0: default candidate sample (2000) */
  unsigned    threads; /* 0: hardware concurrency */
} embscope_precompute_options;

EMBSCOPE_API const char *embscope_version(void);

/* Message for the last failed call on this thread ("" if none). */
EMBSCOPE_API const char *embscope_last_error(void);

EMBSCOPE_API void embscope_string_free(char *s);

/* Loads data_dir/manifest.json and loads or builds every cache under
 * data_dir/cache. With options == NULL the options recorded by the last
 * precompute run are reused (defaults if none). */
EMBSCOPE_API embscope_status embscope_engine_open(const char *data_dir,
                                                  const embscope_precompute_options *options,
                                                  embscope_log_fn log, void *log_user_data,
                                                  embscope_engine **out);

EMBSCOPE_API void embscope_engine_free(embscope_engine *engine);

EMBSCOPE_API uint32_t embscope_engine_point_count(const embscope_engine *engine);
EMBSCOPE_API uint32_t embscope_engine_frame_count(const embscope_engine *engine);
EMBSCOPE_API uint32_t embscope_engine_k(const embscope_engine *engine);

/* Writes the suggestion clusters of frames (a, b), both orientations, as JSON. */
EMBSCOPE_API embscope_status embscope_export_suggestions(const embscope_engine *engine, uint32_t frame_a,
                                                         uint32_t frame_b, const char *out_path);

/* Describes a data directory without computing anything: N, F, per-frame D,
 * metric, projection and cache status. */
EMBSCOPE_API embscope_status embscope_inspect(const char *data_dir, char **out_json);

/* Takes ownership of engine (do not free it afterwards). */
EMBSCOPE_API embscope_status embscope_service_create(embscope_engine *engine, embscope_service **out);

EMBSCOPE_API void embscope_service_free(embscope_service *service);

/* Dispatches one request without a socket. target is "path?query". */
EMBSCOPE_API embscope_status embscope_service_request(embscope_service *service, const char *method,
                                                      const char *target, const char *body,
                                                      int *http_status, char **out_body);

/* Blocks serving HTTP until embscope_service_stop() is called from another
 * thread. static_dir may be NULL; when set it is mounted under /ui. */
EMBSCOPE_API embscope_status embscope_service_serve(embscope_service *service, const char *host, int port,
                                                    const char *static_dir);

EMBSCOPE_API void embscope_service_stop(embscope_service *service);

#ifdef __cplusplus
}
#endif

#endif /* EMBSCOPE_EMBSCOPE_H */
