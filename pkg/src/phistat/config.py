from dataclasses import dataclass


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and budgets for every quadrature and root find.

    Instances are immutable, so a single config can be shared freely.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    root_tol: float = 1e-12
    max_root_iters: int = 200

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol", "root_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        for name in ("max_subdivisions", "max_root_iters"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")


DEFAULT_CONFIG = QuadratureConfig()
