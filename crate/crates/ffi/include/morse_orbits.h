#ifndef MORSE_ORBITS_H
#define MORSE_ORBITS_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Codomain of the field. `Auto` reads a `# codomain:` line and falls back to the real line.
 */
typedef enum MoCodomain {
  MO_CODOMAIN_AUTO = 0,
  MO_CODOMAIN_REAL = 1,
  MO_CODOMAIN_CIRCLE = 2,
} MoCodomain;

/**
 * Status codes; the nonzero analysis codes match the CLI exit codes.
 */
typedef enum MoStatus {
  MO_STATUS_OK = 0,
  MO_STATUS_NULL_POINTER = 1,
  MO_STATUS_INVALID_UTF8 = 2,
  MO_STATUS_PARSE = 3,
  MO_STATUS_SURFACE = 4,
  MO_STATUS_MORSE = 5,
  MO_STATUS_REEB = 6,
  MO_STATUS_HOMOLOGY = 7,
  MO_STATUS_ORBIT = 8,
  MO_STATUS_PANIC = 10,
} MoStatus;

/**
 * Opaque analysis handle.
 */
typedef struct MoAnalysis MoAnalysis;

/**
 * Numeric summary of an analysis. Unknown values are -1.
 */
typedef struct MoSummary {
  bool orientable;
  uint32_t genus;
  uint32_t boundary_components;
  int64_t euler_characteristic;
  size_t c0;
  size_t c1;
  size_t c2;
  size_t reeb_nodes;
  size_t reeb_edges;
  size_t internal_edges;
  /**
   * Exact free rank of the stabilizer component group, or -1.
   */
  int64_t k;
  /**
   * Upper bound on that rank, or -1.
   */
  int64_t k_upper;
  size_t codim_orbit;
  size_t codim_orbit_cr;
} MoSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Analyzes a mesh (OFF or JSON text) and a field (one value per vertex).
 *
 * On success `*out` owns a new handle.
 *
 * # Safety
 * `mesh` and `field` must be nul-terminated strings; `out` must be writable.
 */
enum MoStatus mo_analyze(const char *mesh,
                         const char *field,
                         enum MoCodomain codomain,
                         bool homology,
                         struct MoAnalysis **out);

/**
 * Writes the JSON report into `*out`; free it with `mo_string_free`.
 *
 * # Safety
 * `analysis` must come from `mo_analyze`; `out` must be writable.
 */
enum MoStatus mo_analysis_report_json(const struct MoAnalysis *analysis, char **out);

/**
 * Writes the Reeb graph in DOT format into `*out`; free it with `mo_string_free`.
 *
 * # Safety
 * `analysis` must come from `mo_analyze`; `out` must be writable.
 */
enum MoStatus mo_analysis_reeb_dot(const struct MoAnalysis *analysis, char **out);

/**
 * Writes the homotopy type of the orbit, e.g. `(S1)^3`, into `*out`.
 *
 * # Safety
 * `analysis` must come from `mo_analyze`; `out` must be writable.
 */
enum MoStatus mo_analysis_orbit_type(const struct MoAnalysis *analysis, char **out);

/**
 * Fills `*out` with the numeric summary.
 *
 * # Safety
 * `analysis` must come from `mo_analyze`; `out` must be writable.
 */
enum MoStatus mo_analysis_summary(const struct MoAnalysis *analysis, struct MoSummary *out);

/**
 * Releases a handle from `mo_analyze`. Null is ignored.
 *
 * # Safety
 * `analysis` must be null or come from `mo_analyze`, and not be used afterwards.
 */
void mo_analysis_free(struct MoAnalysis *analysis);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void mo_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. Valid until the next failing call.
 */
const char *mo_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *mo_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MORSE_ORBITS_H */
