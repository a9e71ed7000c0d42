#ifndef GSING_GSING_H
#define GSING_GSING_H

/* C interface of the Gough-Stewart singularity toolkit.
 *
 * A gsing_platform owns one architecture and orientation plus the lazily
 * built formula pipeline. Every function returns a gsing_status; on failure
 * gsing_last_error() describes the problem (thread-local, valid until the
 * next call on the same thread). Strings returned through char** belong to
 * the caller and are released with gsing_free_string. Points and twists are
 * in the normalized frame (A1 and b1 at the origin); twists are ordered
 * (o1, o2, o3, v1, v2, v3). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define GSING_API __declspec(dllexport)
#else
#  define GSING_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gsing_status {
    GSING_OK = 0,
    GSING_FINDINGS = 1,    /* command ran, some verification failed */
    GSING_INPUT = 2,       /* malformed input or argument */
    GSING_INTERNAL = 3,    /* internal consistency error */
    GSING_DEGENERATE = 4,  /* architecture outside the generic case */
    GSING_DOMAIN = 5       /* undefined at the given point */
} gsing_status;

typedef struct gsing_platform gsing_platform;

GSING_API const char* gsing_version(void);
GSING_API const char* gsing_last_error(void);
GSING_API void gsing_free_string(char* s);

/* Input schema "gsing-platform/1": base, platform (6 rational 3-vectors
 * each, "num/den" strings or JSON integers) and cayley {p, q, r}. */
GSING_API gsing_status gsing_platform_load(const char* path, gsing_platform** out);
GSING_API gsing_status gsing_platform_parse(const char* json, gsing_platform** out);
GSING_API gsing_status gsing_platform_random(uint64_t seed, gsing_platform** out);
GSING_API void gsing_platform_free(gsing_platform* p);
GSING_API gsing_status gsing_platform_json(const gsing_platform* p, char** json);

/* Normalized cubic F(x, y, z) as exact polynomial text, and its degree. */
GSING_API gsing_status gsing_cubic_text(gsing_platform* p, char** text);
GSING_API gsing_status gsing_cubic_degree(gsing_platform* p, int* degree);

GSING_API gsing_status gsing_is_singular(gsing_platform* p, const double P[3], double tol, int* singular,
                                         double* residual);
/* Reciprocal twist at a point of the surface, largest component scaled to 1. */
GSING_API gsing_status gsing_rec(gsing_platform* p, const double P[3], double tol, double twist[6]);
/* Position of a twist on the quadric; GSING_DOMAIN off Q or at the
 * indeterminacy points of Pos. */
GSING_API gsing_status gsing_pos(gsing_platform* p, const double twist[6], double tol, double P[3]);
/* Singular position for rational parameters s, t ("num/den"); the result is
 * a JSON array of three "num/den" strings. GSING_DOMAIN where undefined. */
GSING_API gsing_status gsing_param_eval(gsing_platform* p, const char* s, const char* t, char** xyz_json);

/* Runs a command (surface, twist, quadric, param, lines, infinity, verify,
 * mesh) with a JSON options object (may be NULL) and returns the JSON
 * report. The status is GSING_OK, GSING_FINDINGS, GSING_INPUT or
 * GSING_INTERNAL; a report is produced in every case except GSING_INPUT
 * raised before the command starts. */
GSING_API gsing_status gsing_run(gsing_platform* p, const char* command, const char* options_json,
                                 char** report_json);

#ifdef __cplusplus
}
#endif

#endif
