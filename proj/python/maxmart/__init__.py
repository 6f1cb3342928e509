"""Path decompositions driven by the running supremum, plus a seeded Monte
Carlo verification engine. Thin wrapper over the C++ core."""

import importlib

try:
    _impl = importlib.import_module("._maxmart", __name__)
except ImportError:  # a plain CMake build puts the module directly on sys.path
    _impl = importlib.import_module("_maxmart")

__all__ = [
    "TestFunction",
    "azema_yor",
    "balayage_transform",
    "conditional_sup_law",
    "decompose",
    "gen_bessel3",
    "gen_brownian_stopped",
    "gen_gbm_martingale",
    "h_transform",
    "ito_sum",
    "last_passage",
    "list_suites",
    "path_stream_seed",
    "pseudo_stopping_time",
    "reconstruct_multiplicative",
    "rho_density",
    "run_suite",
    "running_infimum",
    "running_supremum",
    "skorokhod_reflection",
]

for _name in __all__:
    globals()[_name] = getattr(_impl, _name)
del _name, _impl, importlib
