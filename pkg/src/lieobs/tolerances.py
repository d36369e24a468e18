from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_PREFIX = "LIEOBS_TOL_"


@dataclass(frozen=True)
class Tolerances:
    kernel_membership: float = 1e-12
    flow_membership: float = 1e-7    # numeric oracle: relative distance of flow(s, g) to K
    identity_cluster: float = 1e-5
    rank: float = 1e-10              # relative singular-value cutoff
    commutator: float = 1e-10
    dstar_boundary: float = 1e-9     # |disc| <= this * (1 + ||D*||^2) counts as a double eigenvalue
    expm_boundary: float = 1e-10
    root_x: float = 1e-12            # bisection width
    root_zero: float = 1e-10         # |f| <= this * magnitude counts as zero
    conjugator_det: float = 1e-10
    hom_residual: float = 1e-9

    def update(self, overrides: dict) -> "Tolerances":
        known = {f.name for f in fields(self)}
        bad = set(overrides) - known
        if bad:
            raise KeyError(f"unknown tolerance(s): {', '.join(sorted(bad))}")
        return replace(self, **{k: float(v) for k, v in overrides.items()})

    def with_env(self, environ=None) -> "Tolerances":
        environ = os.environ if environ is None else environ
        found = {}
        for f in fields(self):
            key = ENV_PREFIX + f.name.upper()
            if key in environ:
                found[f.name] = float(environ[key])
        return self.update(found)


DEFAULT = Tolerances()
