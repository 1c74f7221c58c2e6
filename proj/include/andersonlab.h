#ifndef ANDERSONLAB_H
#define ANDERSONLAB_H

/*
 * C interface to the disordered-operator laboratory. All entry points set a
 * thread-local status/message pair readable through al_last_status and
 * al_last_error; pointer-returning calls yield NULL on failure.
 *
 * Status codes: 0 success, 1 invalid configuration or parameters, 2 numerical
 * failure, 3 precondition refusal (e.g. a degenerate energy in strict mode),
 * 4 file I/O failure.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct al_config al_config;
typedef struct al_report al_report;

const char* al_version(void);

/* Configs: parse from text or a file in the [model] key = value format. */
al_config* al_config_parse(const char* text);
al_config* al_config_load(const char* path);
/* Re-set one field using the file syntax for its value; returns a status. */
int al_config_override(al_config* cfg, const char* key, const char* value);
void al_config_free(al_config* cfg);

/*
 * Run one subcommand. cfg may be NULL only for subcommands that need no
 * model ("verify-identities"). params_json is a JSON object of subcommand
 * parameters, or NULL for all defaults. Returns NULL on any failure.
 */
al_report* al_run(const al_config* cfg, const char* subcommand, const char* params_json);

/* Owned by the report; valid until al_report_free. */
const char* al_report_csv(const al_report* rep);
const char* al_report_json(const al_report* rep);
/* Write either artifact to disk; pass NULL to skip one. Returns a status. */
int al_report_write(const al_report* rep, const char* csv_path, const char* json_path);
void al_report_free(al_report* rep);

int al_last_status(void);
const char* al_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* ANDERSONLAB_H */
