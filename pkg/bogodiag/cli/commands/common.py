# bogodiag/cli/commands/common.py
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from ...core.errors import InvalidParameter
from ...models.run_config import RunConfig

T = TypeVar("T")
R = TypeVar("R")


def require_seed(config: RunConfig) -> int:
    if config.seed is None:
        raise InvalidParameter(f"'{config.command}' draws random instances and needs --seed.", invariant="seed given")
    return config.seed


def map_instances(func: Callable[[T], R], items: Iterable[T], threads: int) -> List[R]:
    """Apply func to independent instances, at most `threads` at a time; results keep input order."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))
