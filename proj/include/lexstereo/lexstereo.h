#ifndef LEXSTEREO_H
#define LEXSTEREO_H

/* C interface of the lexstereo stereo-matching engine.
 *
 * All entry points are thread-compatible: distinct handles may be used from
 * distinct threads concurrently, one handle must not be shared without
 * external synchronization. Functions returning lexstereo_status leave an
 * explanatory message readable through lexstereo_last_error() on failure
 * (the message is thread-local).
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(LEXSTEREO_BUILD)
#define LEXSTEREO_API __declspec(dllexport)
#else
#define LEXSTEREO_API __declspec(dllimport)
#endif
#else
#define LEXSTEREO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lexstereo_status {
  LEXSTEREO_OK = 0,
  LEXSTEREO_ERROR_INVALID_ARGUMENT = 1,
  LEXSTEREO_ERROR_IO = 2,
  LEXSTEREO_ERROR_PARSE = 3,
  LEXSTEREO_ERROR_INTERNAL = 4
} lexstereo_status;

typedef enum lexstereo_view { LEXSTEREO_LEFT = 0, LEXSTEREO_RIGHT = 1 } lexstereo_view;

typedef struct lexstereo_config lexstereo_config;
typedef struct lexstereo_result lexstereo_result;

LEXSTEREO_API const char* lexstereo_version(void);

/* Message of the most recent failure on the calling thread; never NULL. */
LEXSTEREO_API const char* lexstereo_last_error(void);

/* ---- configuration ------------------------------------------------------ */

/* A config starts from the built-in defaults. NULL on allocation failure. */
LEXSTEREO_API lexstereo_config* lexstereo_config_create(void);
LEXSTEREO_API void lexstereo_config_destroy(lexstereo_config* cfg);

/* Applies one "key" = "value" assignment (same keys as the config file). */
LEXSTEREO_API lexstereo_status lexstereo_config_set(lexstereo_config* cfg, const char* key,
                                                    const char* value);

/* Reads a value back; writes a NUL-terminated string into buf. */
LEXSTEREO_API lexstereo_status lexstereo_config_get(const lexstereo_config* cfg,
                                                    const char* key, char* buf,
                                                    size_t buf_size);

/* Loads a flat "key = value" file with '#' comments. */
LEXSTEREO_API lexstereo_status lexstereo_config_load_file(lexstereo_config* cfg,
                                                          const char* path);

/* ---- matching ----------------------------------------------------------- */

/* Batch run: reads the input paths from the config, writes disparity PFMs,
 * colorized PNGs, the trace CSV and metrics into the output directory.
 * On success *out_result (optional, may be NULL) owns the in-memory
 * results. */
LEXSTEREO_API lexstereo_status lexstereo_run(const lexstereo_config* cfg,
                                             lexstereo_result** out_result);

/* In-memory run on interleaved 8-bit RGB buffers (row stride in bytes).
 * Ignores the config's input/output paths; writes nothing to disk. */
LEXSTEREO_API lexstereo_status lexstereo_match_buffers(const lexstereo_config* cfg,
                                                       const uint8_t* left_rgb,
                                                       const uint8_t* right_rgb, int32_t width,
                                                       int32_t height, int32_t stride_bytes,
                                                       lexstereo_result** out_result);

/* ---- results ------------------------------------------------------------ */

LEXSTEREO_API void lexstereo_result_destroy(lexstereo_result* res);

LEXSTEREO_API lexstereo_status lexstereo_result_size(const lexstereo_result* res,
                                                     int32_t* width, int32_t* height);

/* Disparity map, row-major, width*height floats. */
LEXSTEREO_API lexstereo_status lexstereo_result_disparity(const lexstereo_result* res,
                                                          lexstereo_view view, float* out,
                                                          size_t count);

/* Per-pixel plane coefficients (a, b, c), row-major, 3*width*height floats. */
LEXSTEREO_API lexstereo_status lexstereo_result_planes(const lexstereo_result* res,
                                                       lexstereo_view view, float* out,
                                                       size_t count);

LEXSTEREO_API lexstereo_status lexstereo_result_energy(const lexstereo_result* res,
                                                       lexstereo_view view, double* out);

/* Named scalar metric (e.g. "bad20_nonocc"); LEXSTEREO_ERROR_INVALID_ARGUMENT
 * when the metric was not computed. */
LEXSTEREO_API lexstereo_status lexstereo_result_metric(const lexstereo_result* res,
                                                       const char* name, double* out);

/* Optimization trace: one row per (outer iteration, level, group). */
LEXSTEREO_API int32_t lexstereo_result_trace_rows(const lexstereo_result* res);
LEXSTEREO_API lexstereo_status lexstereo_result_trace_row(const lexstereo_result* res,
                                                          int32_t index, int32_t* outer_iter,
                                                          int32_t* level, int32_t* group,
                                                          double* seconds, double* energy_left,
                                                          double* energy_right);

#ifdef __cplusplus
}
#endif

#endif /* LEXSTEREO_H */
