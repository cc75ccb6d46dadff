# bogodiag/cli/io.py
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Iterable, Optional, Sequence, Tuple, Type, TypeVar

from pydantic import BaseModel

from ..config import Tolerances
from ..core.errors import InvalidParameter
from ..core.quadratic_model import QuadraticHamiltonian, bogoliubov_1947_pair, validate_hamiltonian
from ..models.payloads import HamiltonianFile
from ..models.run_config import RunConfig

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


def fmt(value) -> str:
    """CSV cell: floats with 17 significant digits, everything else as str."""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def load_model(path: Path, model: Type[ModelT]) -> ModelT:
    logger.debug(f"Loading {model.__name__} from {path}")
    return model.model_validate_json(Path(path).read_text())


def load_instance(config: RunConfig, tol: Tolerances) -> Tuple[QuadraticHamiltonian, Optional[str]]:
    """Instance from --input, else from --preset."""
    if config.input is not None:
        payload = load_model(config.input, HamiltonianFile)
        Q = validate_hamiltonian(payload.h.to_array(), payload.k.to_array(), tol)
        return Q, payload.name or config.input.stem
    if config.preset == "scalar":
        return validate_hamiltonian([[1.0]], [[0.6]], tol), "scalar"
    if config.preset == "pair":
        return bogoliubov_1947_pair(1.0, 1.0, 0.5, tol), "pair"
    raise InvalidParameter(f"'{config.command}' needs --input or --preset.", invariant="instance given")


def _emit(text: str, path: Optional[Path]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    logger.info(f"Wrote {path}")


def _json_text(value, level: int = 0) -> str:
    """json.dumps layout with indent=2, except that finite floats carry 17 significant digits."""
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(value, dict) and value:
        items = [f"{inner}{json.dumps(str(key))}: {_json_text(item, level + 1)}" for key, item in value.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)) and value:
        items = [f"{inner}{_json_text(item, level + 1)}" for item in value]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(value, float) and math.isfinite(value):
        return fmt(value)
    return json.dumps(value)


def write_json(model: BaseModel, path: Optional[Path]) -> None:
    _emit(_json_text(model.model_dump(mode="json")) + "\n", path)


def write_csv(header: Sequence[str], rows: Iterable[Sequence], path: Optional[Path]) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(value) for value in row])
    _emit(buffer.getvalue(), path)
