from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

from .cohomology import DEFAULT_K


@dataclass(frozen=True)
class Config:
    """Run configuration echoed into every report."""

    max_denominator_exp: int = DEFAULT_K
    cache_dir: Optional[str] = None
    threads: int = 1
    verify: bool = False

    def as_dict(self) -> dict:
        return asdict(self)
