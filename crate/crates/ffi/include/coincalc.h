#ifndef COINCALC_H
#define COINCALC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes. `OK`, `ERROR` and `UNKNOWN` mirror the command-line exit
 codes 0, 1 and 2.
 */
typedef enum CoincalcStatus {
  COINCALC_STATUS_OK = 0,
  COINCALC_STATUS_ERROR = 1,
  /*
   A gap in the database blocked the computation.
   */
  COINCALC_STATUS_UNKNOWN = 2,
  COINCALC_STATUS_NULL_POINTER = 3,
  COINCALC_STATUS_INVALID_UTF8 = 4,
  /*
   The arguments did not parse.
   */
  COINCALC_STATUS_USAGE = 5,
  /*
   The database file could not be loaded.
   */
  COINCALC_STATUS_LOAD = 6,
  COINCALC_STATUS_PANIC = 7,
} CoincalcStatus;

/*
 Opaque database handle.
 */
typedef struct CoincalcDb CoincalcDb;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Opens the database built into the library.

 # Safety
 `out` must be a valid pointer to writable storage for one handle.
 */
enum CoincalcStatus coincalc_db_open_builtin(struct CoincalcDb **out);

/*
 Loads and validates a database file.

 # Safety
 `path` must be a NUL-terminated string; `out` must be writable.
 */
enum CoincalcStatus coincalc_db_open(const char *path, struct CoincalcDb **out);

/*
 Releases a handle; null is ignored.

 # Safety
 `db` must come from one of the open functions and not be used afterwards.
 */
void coincalc_db_free(struct CoincalcDb *db);

/*
 Runs one query, e.g. `{"classify", "--space", "rp", "--nprime", "6",
 "--m", "9", "--f1", "12", "--f2", "12"}`. A global `--db` flag is
 ignored in favour of the handle.

 On `OK`, `UNKNOWN` and `ERROR`, `*out_json` receives the JSON response;
 for the other codes it is set to null.

 # Safety
 `db` must be a live handle, `argv` must point to `argc` NUL-terminated
 strings and `out_json` must be writable.
 */
enum CoincalcStatus coincalc_query(const struct CoincalcDb *db,
                                   const char *const *argv,
                                   uintptr_t argc,
                                   char **out_json);

/*
 Releases a string returned by this library; null is ignored.

 # Safety
 `s` must come from this library and not be used afterwards.
 */
void coincalc_string_free(char *s);

/*
 Message for the last failure on this thread, or null. Valid until the
 next call into the library on the same thread.
 */
const char *coincalc_last_error(void);

/*
 Static, NUL-terminated library version.
 */
const char *coincalc_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COINCALC_H */
