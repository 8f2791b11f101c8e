#include "contagion/c_api.h"

#include <algorithm>
#include <exception>
#include <string>

#include "contagion/config.hpp"
#include "contagion/environment.hpp"
#include "contagion/errors.hpp"

struct contagion_env {
    explicit contagion_env(contagion::SimConfig c) : env(std::move(c)) {}
    contagion::Environment env;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
    g_last_error = what;
    return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const contagion::ConfigError& e) {
        return fail(CONTAGION_ERR_CONFIG, e.what());
    } catch (const contagion::ContractViolation& e) {
        return fail(CONTAGION_ERR_STATE, e.what());
    } catch (const std::exception& e) {
        return fail(CONTAGION_ERR_INTERNAL, e.what());
    }
}

void fill_info(const contagion::StepInfo& in, double* info) {
    if (info == nullptr) {
        return;
    }
    info[0] = in.counts.s;
    info[1] = in.counts.i;
    info[2] = in.counts.r;
    info[3] = in.counts.d;
    info[4] = in.agent_infection_probability;
    info[5] = in.t;
    info[6] = in.new_infections;
    info[7] = in.reinfected;
}

int copy_observation(const contagion::Observation& obs, double* out, size_t len) {
    if (out == nullptr || len != obs.values.size()) {
        return fail(CONTAGION_ERR_ARGUMENT, "observation buffer has the wrong length");
    }
    std::copy(obs.values.begin(), obs.values.end(), out);
    return CONTAGION_OK;
}

}  // namespace

extern "C" {

contagion_env* contagion_env_create(const char* config_text) {
    contagion_env* out = nullptr;
    const int rc = guarded([&] {
        const std::string text = config_text ? config_text : "";
        out = new contagion_env(contagion::parse_config(text));
        return CONTAGION_OK;
    });
    return rc == CONTAGION_OK ? out : nullptr;
}

void contagion_env_destroy(contagion_env* env) { delete env; }

const char* contagion_last_error(void) { return g_last_error.c_str(); }

size_t contagion_env_observation_size(const contagion_env* env) {
    return env ? contagion::observation_size(env->env.config().n_humans) : 0;
}

int contagion_env_observation_bounds(const contagion_env* env, double* low, double* high, size_t len) {
    if (env == nullptr || low == nullptr || high == nullptr) {
        return fail(CONTAGION_ERR_ARGUMENT, "null argument");
    }
    const int n = env->env.config().n_humans;
    if (len != contagion::observation_size(n)) {
        return fail(CONTAGION_ERR_ARGUMENT, "bounds buffer has the wrong length");
    }
    const auto lo = contagion::observation_low(n);
    const auto hi = contagion::observation_high(n);
    std::copy(lo.begin(), lo.end(), low);
    std::copy(hi.begin(), hi.end(), high);
    return CONTAGION_OK;
}

int contagion_env_reset(contagion_env* env, uint64_t seed, double* observation, size_t obs_len,
                        double* info) {
    if (env == nullptr) {
        return fail(CONTAGION_ERR_ARGUMENT, "null environment");
    }
    return guarded([&] {
        if (obs_len != contagion::observation_size(env->env.config().n_humans)) {
            return fail(CONTAGION_ERR_ARGUMENT, "observation buffer has the wrong length");
        }
        const auto r = env->env.reset(seed);
        fill_info(r.info, info);
        return copy_observation(r.observation, observation, obs_len);
    });
}

int contagion_env_step(contagion_env* env, const double* action, double* observation,
                       size_t obs_len, double* reward, int* terminated, int* truncated,
                       double* info) {
    if (env == nullptr || action == nullptr) {
        return fail(CONTAGION_ERR_ARGUMENT, "null argument");
    }
    return guarded([&] {
        if (obs_len != contagion::observation_size(env->env.config().n_humans)) {
            return fail(CONTAGION_ERR_ARGUMENT, "observation buffer has the wrong length");
        }
        const auto out = env->env.step({action[0], action[1], action[2]});
        if (reward) *reward = out.reward;
        if (terminated) *terminated = out.terminated ? 1 : 0;
        if (truncated) *truncated = out.truncated ? 1 : 0;
        fill_info(out.info, info);
        return copy_observation(out.observation, observation, obs_len);
    });
}

}  // extern "C"
