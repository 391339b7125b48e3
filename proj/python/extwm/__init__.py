"""Python interface to the exterior wave-map numerical laboratory.

The compiled extension ``_core`` is produced by the CMake build; this package
locates it next to itself, in the repository ``build/`` directory, or in a
directory named by the ``EXTWM_CORE_DIR`` environment variable.
"""

import os
import sys
from pathlib import Path


def _locate_core():
    here = Path(__file__).resolve()
    candidates = [here.parent]
    env = os.environ.get("EXTWM_CORE_DIR")
    if env:
        candidates.append(Path(env))
    candidates.append(here.parents[2] / "build")
    for cand in candidates:
        if cand.is_dir() and any(cand.glob("_core*.so")):
            if str(cand) not in sys.path:
                sys.path.insert(0, str(cand))
            return
    raise ImportError(
        "extwm._core not found; build it with cmake (see README) or set "
        "EXTWM_CORE_DIR to the directory containing _core*.so"
    )


_locate_core()

from _core import (  # noqa: E402
    budget_constants,
    budget_rhs,
    coercivity_sample,
    eps_for,
    exact_areas,
    find_harmonic,
    plancherel,
    run_config,
    weyl_m,
    zeros_of_f,
)

__all__ = [
    "budget_constants",
    "budget_rhs",
    "coercivity_sample",
    "eps_for",
    "exact_areas",
    "find_harmonic",
    "plancherel",
    "run_config",
    "weyl_m",
    "zeros_of_f",
]
