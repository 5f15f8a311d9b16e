"""Hot-kernel backend selection.

The capacity solver's inner loops exist twice with identical signatures: a
numba-jitted version and a pure-numpy fallback. The environment variable
``CQCAP_BACKEND`` picks the path:

* unset or ``auto``: numba when it imports, numpy otherwise;
* ``numpy``: force the pure-numpy fallback;
* ``numba``: insist on the jit path (ImportError if numba is missing).
"""

import os

ENV_VAR = "CQCAP_BACKEND"


def load_kernels(choice: str):
    """Resolve a backend choice to ``(kernel module, backend name)``."""
    choice = choice.strip().lower()
    if choice == "numpy":
        from . import _kernels_numpy

        return _kernels_numpy, "numpy"
    if choice == "numba":
        from . import _kernels_numba

        return _kernels_numba, "numba"
    if choice != "auto":
        raise ValueError(
            f"{ENV_VAR} must be 'auto', 'numba', or 'numpy', not {choice!r}"
        )
    try:
        from . import _kernels_numba

        return _kernels_numba, "numba"
    except ImportError:
        from . import _kernels_numpy

        return _kernels_numpy, "numpy"


kernels, active_backend = load_kernels(os.environ.get(ENV_VAR, "auto"))
