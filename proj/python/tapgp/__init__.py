"""Active tapping surface reconstruction with Gaussian processes."""

from ._tapgp import (
    ConfigError,
    ExhaustedGrid,
    ExplorationState,
    FactorizationFailure,
    FittedGP,
    KernelParams,
    RunConfig,
    RunResult,
    Scene,
    Strategy,
    SuggestMode,
    SurfaceModelConfig,
    TapResult,
    __version__,
    cli,
    compare,
    effective_tap_improvement,
    kernel_matrix,
    rbf,
    run,
)

__all__ = [
    "ConfigError",
    "ExhaustedGrid",
    "ExplorationState",
    "FactorizationFailure",
    "FittedGP",
    "KernelParams",
    "RunConfig",
    "RunResult",
    "Scene",
    "Strategy",
    "SuggestMode",
    "SurfaceModelConfig",
    "TapResult",
    "cli",
    "compare",
    "effective_tap_improvement",
    "kernel_matrix",
    "rbf",
    "run",
]
