/* Flat C interface over the environment for foreign-function bindings.
 *
 * All buffers are caller-owned arrays of double. Functions return 0 on success and
 * a nonzero code on failure; the message of the last failure on a handle (or of a
 * failed create) is available through contagion_last_error().
 *
 * Info buffer layout (CONTAGION_INFO_SIZE doubles):
 *   [0] S count  [1] I count  [2] R count  [3] D count
 *   [4] agent infection probability this step  [5] t
 *   [6] new transmissions this step  [7] humans reinfected this step
 */
#ifndef CONTAGION_C_API_H_
#define CONTAGION_C_API_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define CONTAGION_INFO_SIZE 8

enum contagion_status {
    CONTAGION_OK = 0,
    CONTAGION_ERR_CONFIG = 1,
    CONTAGION_ERR_STATE = 2,
    CONTAGION_ERR_ARGUMENT = 3,
    CONTAGION_ERR_INTERNAL = 4
};

typedef struct contagion_env contagion_env;

/* `config_text` uses the key = value format; NULL or "" gives the defaults.
 * Returns NULL on failure. */
contagion_env* contagion_env_create(const char* config_text);
void contagion_env_destroy(contagion_env* env);

/* Thread-local message of the most recent failure. */
const char* contagion_last_error(void);

size_t contagion_env_observation_size(const contagion_env* env);
int contagion_env_observation_bounds(const contagion_env* env, double* low, double* high, size_t len);

int contagion_env_reset(contagion_env* env, uint64_t seed, double* observation, size_t obs_len,
                        double* info);

/* `action` holds dx, dy, alpha; out-of-range values are clamped. */
int contagion_env_step(contagion_env* env, const double* action, double* observation,
                       size_t obs_len, double* reward, int* terminated, int* truncated,
                       double* info);

#ifdef __cplusplus
}
#endif

#endif /* CONTAGION_C_API_H_ */
