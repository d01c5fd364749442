"""Runge-Kutta time stepping for the method-of-lines FR baseline.

Strong-stability-preserving schemes are written in convex-combination
form so a limiter can act after every stage; the classical and the
six-stage fifth-order schemes use their Butcher tableaux.
"""

import numpy as np

from .errors import ConfigurationError

SSPRK22 = "ssprk22"
SSPRK33 = "ssprk33"
SSPRK54 = "ssprk54"
RK4 = "rk4"
RK65 = "rk65"

# SSP stages: new = sum(coef * state[idx]) + dt * sum(coef * L(state[idx]));
# state index 0 is u^n, index k is the k-th stage result.
_SSP = {
    SSPRK22: {
        "c": [0.0, 1.0],
        "stages": [
            {"u": {0: 1.0}, "L": {0: 1.0}},
            {"u": {0: 0.5, 1: 0.5}, "L": {1: 0.5}},
        ],
    },
    SSPRK33: {
        "c": [0.0, 1.0, 0.5],
        "stages": [
            {"u": {0: 1.0}, "L": {0: 1.0}},
            {"u": {0: 0.75, 1: 0.25}, "L": {1: 0.25}},
            {"u": {0: 1.0 / 3.0, 2: 2.0 / 3.0}, "L": {2: 2.0 / 3.0}},
        ],
    },
    # optimal five-stage fourth-order SSP scheme
    SSPRK54: {
        "c": [0.0, 0.391752226571890, 0.586079689311540, 0.474542363026874,
              0.935010630967652],
        "stages": [
            {"u": {0: 1.0}, "L": {0: 0.391752226571890}},
            {
                "u": {0: 0.444370493651235, 1: 0.555629506348765},
                "L": {1: 0.368410593050371},
            },
            {
                "u": {0: 0.620101851488403, 2: 0.379898148511597},
                "L": {2: 0.251891774271694},
            },
            {
                "u": {0: 0.178079954393132, 3: 0.821920045606868},
                "L": {3: 0.544974750228521},
            },
            {
                "u": {2: 0.517231671970585, 3: 0.096059710526147,
                      4: 0.386708617503269},
                "L": {3: 0.063692468666290, 4: 0.226007483236906},
            },
        ],
    },
}

_BUTCHER = {
    RK4: {
        "c": [0.0, 0.5, 0.5, 1.0],
        "a": [[], [0.5], [0.0, 0.5], [0.0, 0.0, 1.0]],
        "b": [1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
    },
    # six-stage fifth-order formula (Fehlberg's higher-order member)
    RK65: {
        "c": [0.0, 0.25, 3.0 / 8.0, 12.0 / 13.0, 1.0, 0.5],
        "a": [
            [],
            [0.25],
            [3.0 / 32.0, 9.0 / 32.0],
            [1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0],
            [439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0],
            [-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0],
        ],
        "b": [16.0 / 135.0, 0.0, 6656.0 / 12825.0, 28561.0 / 56430.0,
              -9.0 / 50.0, 2.0 / 55.0],
    },
}

SCHEMES = (SSPRK22, SSPRK33, SSPRK54, RK4, RK65)


def n_stages(name):
    if name in _SSP:
        return len(_SSP[name]["stages"])
    if name in _BUTCHER:
        return len(_BUTCHER[name]["b"])
    raise ConfigurationError(f"unknown RK scheme {name!r}")


def default_scheme(degree):
    """Time integrator of order degree+1 used with degree-N elements."""
    table = {1: SSPRK22, 2: SSPRK33, 3: SSPRK54, 4: RK65}
    try:
        return table[degree]
    except KeyError:
        raise ConfigurationError(f"no default RK scheme for degree {degree}") from None


def rk_step(name, u, t, dt, residual, post_stage=None):
    """One step u(t) -> u(t+dt) of du/dt = residual(u, t).

    ``post_stage`` (optional) maps a stage state to its limited version;
    for SSP schemes it runs after every stage, for Butcher schemes after
    the final combination.
    """
    if name in _SSP:
        tab = _SSP[name]
        states = [u]
        res_cache = {}

        def L(k):
            if k not in res_cache:
                res_cache[k] = residual(states[k], t + tab["c"][k] * dt)
            return res_cache[k]

        for stage in tab["stages"]:
            new = np.zeros_like(u)
            for k, coef in stage["u"].items():
                new += coef * states[k]
            for k, coef in stage["L"].items():
                new += dt * coef * L(k)
            if post_stage is not None:
                new = post_stage(new)
            states.append(new)
        return states[-1]

    if name in _BUTCHER:
        tab = _BUTCHER[name]
        ks = []
        for i, row in enumerate(tab["a"]):
            ui = u.copy()
            for aij, kj in zip(row, ks):
                if aij != 0.0:
                    ui += dt * aij * kj
            ks.append(residual(ui, t + tab["c"][i] * dt))
        new = u.copy()
        for bi, ki in zip(tab["b"], ks):
            if bi != 0.0:
                new += dt * bi * ki
        if post_stage is not None:
            new = post_stage(new)
        return new

    raise ConfigurationError(f"unknown RK scheme {name!r}")
